/*
 * Copyright 2026 The radarseg Authors. All Rights Reserved.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *       http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef RADARSEG_CONFIG_HPP
#define RADARSEG_CONFIG_HPP

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace radarseg {

/// Flat `key = value` text config. `#` starts a comment. Later keys override
/// earlier ones. Every lookup marks the key as consumed so leftovers can be
/// reported as unknown.
class KeyValueConfig {
public:
    static KeyValueConfig parse(std::istream& in);
    static KeyValueConfig load(const std::filesystem::path& path);

    void set(const std::string& key, const std::string& value) { values_[key] = value; }
    bool contains(const std::string& key) const { return values_.count(key) != 0; }

    std::optional<std::string> get_string(const std::string& key) const;
    std::optional<double> get_double(const std::string& key) const;
    std::optional<std::int64_t> get_int(const std::string& key) const;
    /// Comma-separated numbers.
    std::optional<std::vector<double>> get_doubles(const std::string& key) const;

    /// Keys never looked up. Callers turn these into errors.
    std::vector<std::string> unconsumed() const;

    const std::map<std::string, std::string>& values() const noexcept { return values_; }

private:
    std::map<std::string, std::string> values_;
    mutable std::set<std::string> consumed_;
};

/// 64-bit FNV-1a content hash, hex encoded.
std::string content_hash(const std::string& bytes);
std::string file_hash(const std::filesystem::path& path);

}  // namespace radarseg

#endif  // RADARSEG_CONFIG_HPP
