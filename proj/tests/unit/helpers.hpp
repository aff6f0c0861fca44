#pragma once

#include <filesystem>
#include <initializer_list>
#include <string>
#include <tuple>
#include <vector>

#include "bebplan/error.hpp"
#include "bebplan/network.hpp"

namespace testing {

inline const std::filesystem::path kData = BEBPLAN_DATA_DIR;

// Depot plus the given stations, all legs 5 km / 10 min apart; `candidates`
// marks opportunity-charging stations.
inline bebplan::Network make_network(std::vector<bebplan::Trip> trips, std::vector<std::string> stations,
                                     std::vector<std::string> candidates = {}, double leg_km = 5.0,
                                     double leg_min = 10.0) {
  using namespace bebplan;
  std::vector<Station> st = {{kDepotAlias, false, true}};
  for (const auto& s : stations) {
    bool cand = false;
    for (const auto& c : candidates) cand = cand || c == s;
    st.push_back({s, cand, false});
  }
  DeadheadMatrix dh;
  for (const auto& a : st) {
    for (const auto& b : st) {
      if (a.id != b.id) dh.set(a.id, b.id, {leg_km, leg_min});
    }
  }
  return Network(std::move(st), std::move(trips), std::move(dh));
}

inline std::filesystem::path scratch_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("bebplan_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace testing

#define CHECK_THROWS_CODE(expr, expected_code)                        \
  do {                                                                \
    bool caught_ = false;                                             \
    try {                                                             \
      (void)(expr);                                                   \
    } catch (const bebplan::Error& e_) {                              \
      caught_ = true;                                                 \
      CHECK_MESSAGE(e_.code() == (expected_code), e_.what());         \
    }                                                                 \
    CHECK_MESSAGE(caught_, "expected bebplan::Error from " #expr);    \
  } while (0)
