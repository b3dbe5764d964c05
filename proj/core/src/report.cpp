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

#include "tauforge/report.hpp"

#include <atomic>
#include <cstdlib>
#include <sstream>
#include <thread>

namespace tauforge {

void Report::add(const std::string& name, const std::string& anchor, bool pass,
                 const std::string& detail) {
  records_.push_back({name, anchor, pass, detail});
}

bool Report::all_pass() const {
  for (const auto& r : records_)
    if (!r.pass) return false;
  return true;
}

namespace {
std::string json_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      default: out += c;
    }
  }
  return out;
}
}  // namespace

std::string Report::jsonl() const {
  std::ostringstream os;
  for (const auto& r : records_) {
    os << "{\"check\":\"" << json_escape(r.name) << "\",\"anchor\":\""
       << json_escape(r.anchor) << "\",\"pass\":" << (r.pass ? "true" : "false");
    if (!r.detail.empty()) os << ",\"detail\":\"" << json_escape(r.detail) << "\"";
    os << "}\n";
  }
  return os.str();
}

std::string Report::human() const {
  std::ostringstream os;
  for (const auto& r : records_) {
    os << (r.pass ? "PASS" : "FAIL") << "  " << r.name;
    if (!r.anchor.empty()) os << "  [" << r.anchor << "]";
    if (!r.detail.empty()) os << "  -- " << r.detail;
    os << "\n";
  }
  return os.str();
}

void parallel_for(size_t count, const std::function<void(size_t)>& fn) {
  unsigned hw = std::thread::hardware_concurrency();
  if (const char* env = std::getenv("TAUFORGE_THREADS")) {
    long cap = std::strtol(env, nullptr, 10);
    if (cap > 0 && (unsigned)cap < hw) hw = (unsigned)cap;
    if (cap > 0 && hw == 0) hw = (unsigned)cap;
  }
  if (hw <= 1 || count <= 1) {
    for (size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<size_t> next{0};
  unsigned workers = std::min<size_t>(hw, count);
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&]() {
      for (;;) {
        size_t i = next.fetch_add(1);
        if (i >= count) break;
        fn(i);
      }
    });
  }
  for (auto& t : pool) t.join();
}

}  // namespace tauforge
