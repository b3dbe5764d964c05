/*
   Copyright 2026 The tauforge authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

        http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

#ifndef TAUFORGE_REPORT_HPP
#define TAUFORGE_REPORT_HPP

#include <functional>
#include <string>
#include <vector>

namespace tauforge {

/// One verification record. 'anchor' names the construction being checked so
/// reports stay greppable; records print as one JSON object per line.
struct CheckRecord {
  std::string name;
  std::string anchor;
  bool pass = false;
  std::string detail;
};

class Report {
 public:
  void add(const std::string& name, const std::string& anchor, bool pass,
           const std::string& detail = "");
  bool all_pass() const;
  size_t size() const { return records_.size(); }
  const std::vector<CheckRecord>& records() const { return records_; }

  /// Line-oriented JSON, one record per line, deterministic order.
  std::string jsonl() const;
  /// Human-readable table.
  std::string human() const;

 private:
  std::vector<CheckRecord> records_;
};

/// Run fn(i) for i in [0, count) on up to TAUFORGE_THREADS workers (default:
/// hardware concurrency). Results must be written to pre-sized slots so the
/// output order stays deterministic.
void parallel_for(size_t count, const std::function<void(size_t)>& fn);

}  // namespace tauforge

#endif
