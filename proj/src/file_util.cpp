// Copyright 2026 The trajpref Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "trajpref/file_util.hpp"

#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>

#include <openssl/sha.h>

#include "trajpref/errors.hpp"

namespace trajpref
{

std::string read_text_file(const std::filesystem::path & path)
{
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw MissingArtifactError("cannot open '" + path.string() + "'");
  }
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_text_file(const std::filesystem::path & path, const std::string & text)
{
  if (path.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw std::runtime_error("cannot write '" + path.string() + "'");
  }
  out << text;
  out.close();
  if (!out) {
    throw std::runtime_error("failed writing '" + path.string() + "'");
  }
}

std::string sha1_hex(const std::string & data)
{
  unsigned char digest[SHA_DIGEST_LENGTH];
  SHA1(reinterpret_cast<const unsigned char *>(data.data()), data.size(), digest);
  std::ostringstream os;
  os << std::hex << std::setfill('0');
  for (unsigned char c : digest) {
    os << std::setw(2) << static_cast<int>(c);
  }
  return os.str();
}

// Same hash `git hash-object` prints for a file with this content.
std::string git_blob_hash(const std::string & content)
{
  return sha1_hex("blob " + std::to_string(content.size()) + '\0' + content);
}

}  // namespace trajpref
