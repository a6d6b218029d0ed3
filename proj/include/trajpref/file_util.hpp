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

#ifndef TRAJPREF__FILE_UTIL_HPP_
#define TRAJPREF__FILE_UTIL_HPP_

#include <filesystem>
#include <string>

namespace trajpref
{

std::string read_text_file(const std::filesystem::path & path);

/// Writes `text`, creating parent directories as needed.
void write_text_file(const std::filesystem::path & path, const std::string & text);

/// SHA-1 over "blob <size>\0<content>", the identifier git assigns to file contents.
std::string git_blob_hash(const std::string & content);

std::string sha1_hex(const std::string & data);

}  // namespace trajpref

#endif  // TRAJPREF__FILE_UTIL_HPP_
