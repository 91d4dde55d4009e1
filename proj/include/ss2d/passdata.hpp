#pragma once

#include <array>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "ss2d/world.hpp"

namespace ss2d::passdata {

struct PassEvent {
  int cycle = 0;
  int kicker_unum = 0;
  int receiver_unum = 0;
};

inline constexpr int kBallFeatures = 12;
inline constexpr int kOurFeatures = 42;
inline constexpr int kTheirFeatures = 24;
inline constexpr int kRowLength = kBallFeatures + 11 * kOurFeatures + 11 * kTheirFeatures;
static_assert(kRowLength == 738);

/// Top-k for the nearest / high-risk opponent groups.
inline constexpr int kTopK = 2;

struct FeatureRow {
  std::vector<double> values;  // kRowLength entries
  int label_unum = 0;
  int label_index = 0;
};

enum class SortMode { Unum, XSort };

struct SortingConfig {
  SortMode mode = SortMode::Unum;
  bool kicker_first = false;
};

inline constexpr SortingConfig kAllSortings[] = {
    {SortMode::Unum, false}, {SortMode::Unum, true}, {SortMode::XSort, false}, {SortMode::XSort, true}};

/// Returns indices into `players` in output order. Unum: ascending unum.
/// XSort: ascending x, ties by unum. kicker_first moves the kicker to the
/// front keeping the rest in order (kicker_unum = 0 disables it).
/// Throws std::domain_error on a roster that is not 11 distinct unums.
std::vector<int> sort_players(const std::vector<PlayerState>& players, const SortingConfig& config,
                              int kicker_unum);

/// Field names of the ball, our-player and opponent blocks.
const std::array<const char*, kBallFeatures>& ball_feature_names();
const std::array<const char*, kOurFeatures>& our_feature_names();
const std::array<const char*, kTheirFeatures>& their_feature_names();

/// Full-state extraction (all staleness counts zero).
FeatureRow extract_row(const WorldSnapshot& snapshot, const PassEvent& event, const SortingConfig& config,
                       const SimConfig& cfg = {});

/// Extraction from the kicker's possibly noisy view; counts are taken from it.
FeatureRow extract_row(const AgentObservation& view, const PassEvent& event, const SortingConfig& config,
                       const SimConfig& cfg = {});

struct LogContents {
  std::vector<std::pair<WorldSnapshot, PassEvent>> events;
  std::size_t lines = 0;      // non-blank lines seen
  std::size_t malformed = 0;  // skipped lines
};

/// Reads `.jsonl` snapshots; lines carrying {"pass": {"kicker", "receiver"}}
/// become events. Malformed lines are skipped and counted. Throws IoError on
/// an unreadable stream and FormatError when more than half the lines are
/// malformed.
LogContents read_log(std::istream& in, const SimConfig& cfg = {});

std::string csv_header();
void write_csv_row(std::ostream& out, const FeatureRow& row);
/// Parses rows written by write_csv_row (header line optional).
std::vector<FeatureRow> read_csv(std::istream& in);

}  // namespace ss2d::passdata
