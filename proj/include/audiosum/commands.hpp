// Copyright 2026 The audiosum Authors.
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

#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "audiosum/config.hpp"
#include "audiosum/features.hpp"

namespace audiosum {

enum ExitCode : int {
  kExitOk = 0,
  kExitTotalFailure = 1,
  kExitUsage = 2,
  kExitPartialFailure = 3,
};

/// Exit code for `failed` failures out of `total` songs.
int exit_code_for(std::size_t failed, std::size_t total);

/// `input` is a WAV file or a manifest. Writes `<id>.wav` and
/// `<id>.selection.json` per song into `out_dir`.
int cmd_summarize(const std::filesystem::path& input,
                  const SummaryConfig& config,
                  const std::filesystem::path& out_dir, unsigned jobs,
                  std::ostream& log);

/// Writes report.tsv, report.json and run.json into `out_dir`.
int cmd_evaluate(const std::filesystem::path& manifest,
                 const std::filesystem::path& grid_file,
                 const std::vector<FeatureView>& views,
                 const std::filesystem::path& out_dir, unsigned jobs,
                 std::ostream& log);

int cmd_features(const std::filesystem::path& audio, FeatureView view,
                 double frame_len_s, const std::filesystem::path& out,
                 std::ostream& log);

/// Prints KL(a || b) for the raw and log-mel views.
int cmd_kl(const std::filesystem::path& original,
           const std::filesystem::path& summary, bool trim, std::ostream& out);

/// True if the file starts with a RIFF header.
bool looks_like_wav(const std::filesystem::path& path);

}  // namespace audiosum
