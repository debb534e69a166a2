/* Copyright 2026 The Voxprep Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

// Scripted stand-in for external scorer processes in tests. Speaks the
// line protocol: one path per stdin line, one JSON result per stdout line.
//
//   fake_tool scorer [--mos V] [--dims] [--utmos V] [--hash-mos]
//                    [--malformed-every N] [--out-of-range]
//                    [--crash-after N] [--skip-every N] [--sleep S]

#include <unistd.h>

#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <functional>
#include <iostream>
#include <string>

int main(int argc, char** argv) {
  if (argc < 2 || std::strcmp(argv[1], "scorer") != 0) {
    std::fprintf(stderr, "usage: fake_tool scorer [flags]\n");
    return 64;
  }

  double mos = 3.0;
  double utmos = 0.0;
  bool dims = false;
  bool hash_mos = false;
  bool out_of_range = false;
  long malformed_every = 0;
  long crash_after = -1;
  long skip_every = 0;
  double sleep_s = 0.0;

  for (int i = 2; i < argc; ++i) {
    const std::string arg = argv[i];
    const auto next = [&]() -> const char* { return i + 1 < argc ? argv[++i] : "0"; };
    if (arg == "--mos") mos = std::atof(next());
    else if (arg == "--utmos") utmos = std::atof(next());
    else if (arg == "--dims") dims = true;
    else if (arg == "--hash-mos") hash_mos = true;
    else if (arg == "--out-of-range") out_of_range = true;
    else if (arg == "--malformed-every") malformed_every = std::atol(next());
    else if (arg == "--crash-after") crash_after = std::atol(next());
    else if (arg == "--skip-every") skip_every = std::atol(next());
    else if (arg == "--sleep") sleep_s = std::atof(next());
  }

  std::string path;
  long line_no = 0;
  long answered = 0;
  while (std::getline(std::cin, path)) {
    ++line_no;
    if (sleep_s > 0.0) ::usleep(static_cast<useconds_t>(sleep_s * 1e6));
    if (skip_every > 0 && line_no % skip_every == 0) continue;
    if (malformed_every > 0 && line_no % malformed_every == 0) {
      std::printf("BOGUS LINE %ld\n", line_no);
      std::fflush(stdout);
      continue;
    }

    double v = mos;
    if (hash_mos) {
      const std::size_t h = std::hash<std::string>{}(path);
      v = 1.0 + 4.0 * static_cast<double>(h % 10000) / 10000.0;
    }
    if (out_of_range) v = 7.2;

    std::printf("{\"path\": \"%s\", \"mos\": %.4f", path.c_str(), v);
    if (dims) {
      std::printf(", \"noi\": %.4f, \"col\": %.4f, \"dis\": %.4f, \"loud\": %.4f",
                  std::min(5.0, v + 0.1), std::max(1.0, v - 0.1), v, v);
    }
    if (utmos > 0.0) std::printf(", \"utmos\": %.4f", utmos);
    std::printf("}\n");
    std::fflush(stdout);

    ++answered;
    if (crash_after >= 0 && answered >= crash_after) return 3;
  }
  return 0;
}
