// Copyright 2026 The zakotfs Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------


#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "zakotfs/channel.hpp"
#include "zakotfs/frame_params.hpp"

/// Monte-Carlo BER harness.
///
/// Frame f at SNR index s draws everything from
/// frame_seed(master, s, f) = splitmix64(master ^ splitmix64((s << 32) | f)),
/// split further into channel, bit and noise streams, so results do not
/// depend on thread count or scheduling.
namespace zakotfs {

enum class EqualizerChoice { fd_banded, dd_dense, both };
enum class TapSource { analytic, sounding };

std::string to_string(EqualizerChoice e);
std::string to_string(TapSource t);

struct SimConfig {
  FrameParams params = FrameParams::vehicular_default();
  /// "veh_a", "identity" (unit DD tap), or a profile file path.
  std::string channel = "veh_a";
  std::vector<double> snr_db = {0.0, 5.0, 10.0, 15.0, 20.0};
  long frames = 100;
  EqualizerChoice equalizer = EqualizerChoice::both;
  /// Total FD band width b = 4L + 1; 0 selects the full band 4 l_max + 1.
  int band = 0;
  std::uint64_t seed = 1;
  TapSource taps = TapSource::analytic;
  std::string out = "ber.csv";
  int threads = 1;
  /// Skip noise injection; the equalizers still regularize with the SNR grid.
  bool noiseless = false;

  /// Half band L of the FD channel matrix used by the banded equalizer.
  int equalizer_half_band() const;
  /// Throws std::invalid_argument with an explanatory message.
  void validate() const;

  bool operator==(const SimConfig&) const = default;
};

struct BERRecord {
  double snr_db = 0.0;
  std::string equalizer;
  int band_width = 0;  // 0 for the dense DD equalizer
  long frames = 0;
  long bits = 0;
  long bit_errors = 0;
  double ber = 0.0;
  double wall_time_s = 0.0;
  std::uint64_t seed = 0;

  bool operator==(const BERRecord&) const = default;
};

/// Per-frame bit errors of one equalizer at one SNR point, in frame order.
struct FrameErrors {
  std::vector<long> fd_banded;
  std::vector<long> dd_dense;
};

std::uint64_t splitmix64(std::uint64_t x);
std::uint64_t frame_seed(std::uint64_t master, std::size_t snr_index, std::size_t frame_index);

/// Runs the sweep. When `per_frame` is non-null it receives the per-frame
/// error counts of every SNR point. `progress` is called once per finished
/// SNR point.
std::vector<BERRecord> run_ber_sweep(
    const SimConfig& config, std::vector<FrameErrors>* per_frame = nullptr,
    const std::function<void(const BERRecord&)>& progress = nullptr);

/// Flat "key = value" text; '#' starts a comment. Omitted keys keep their
/// defaults. Throws std::runtime_error with the offending line number on
/// parse errors and std::invalid_argument on constraint violations.
SimConfig parse_config(std::istream& in);
SimConfig load_config(const std::string& path);
void write_config(const SimConfig& config, std::ostream& out);
void save_config(const SimConfig& config, const std::string& path);

inline constexpr const char* kResultsHeader =
    "snr_db,equalizer,band_width,frames,bits,bit_errors,ber,wall_time_s,seed";

void write_results(const std::vector<BERRecord>& records, std::ostream& out);
void write_results(const std::vector<BERRecord>& records, const std::string& path);
std::vector<BERRecord> read_results(std::istream& in);

/// snr_db,ber_fd_banded,ber_dd_dense; a missing equalizer leaves its column empty.
void write_plot_data(const std::vector<BERRecord>& records, std::ostream& out);
void write_plot_data(const std::vector<BERRecord>& records, const std::string& path);

}  // namespace zakotfs
