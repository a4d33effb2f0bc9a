#include "neghappy/atlas.hpp"

#include <fstream>
#include <set>

#include <gtest/gtest.h>

#include "neghappy/happy.hpp"
#include "neghappy/serialize.hpp"

namespace neghappy {
namespace {

json load_fixture(const std::string& name) {
  std::ifstream in(std::string(NEGHAPPY_TEST_DATA) + "/" + name);
  EXPECT_TRUE(in) << "missing fixture " << name;
  return json::parse(in);
}

TEST(Enumerate, MatchesPublishedTable) {
  const json expected = load_fixture("table1.json");
  ASSERT_EQ(expected.size(), 9u);
  for (const auto& row : expected) {
    const std::int64_t b = row.at("base").get<std::int64_t>();
    const CycleAtlas atlas = enumerate(PowerParams(2, Base{b}));
    EXPECT_EQ(atlas.fixed_points,
              row.at("fixed_points").get<std::vector<std::int64_t>>())
        << "base " << b;
    EXPECT_EQ(atlas.cycles,
              row.at("cycles").get<std::vector<std::vector<std::int64_t>>>())
        << "base " << b;
    EXPECT_EQ(atlas.smallest_happy_gt1,
              row.at("smallest_happy_gt1").get<std::int64_t>())
        << "base " << b;
    ASSERT_TRUE(atlas.largest_negative_happy) << "base " << b;
    EXPECT_EQ(*atlas.largest_negative_happy,
              row.at("largest_negative_happy").get<std::int64_t>())
        << "base " << b;
  }
}

TEST(Enumerate, FrozenUSets) {
  using V = std::vector<std::int64_t>;
  EXPECT_EQ(enumerate(PowerParams(2, Base{-3})).u_set, (V{1, 2, 4, 6}));
  EXPECT_EQ(enumerate(PowerParams(2, Base{-4})).u_set, (V{1, 6, 14}));
  EXPECT_EQ(enumerate(PowerParams(2, Base{-6})).u_set,
            (V{1, 2, 4, 11, 16, 29, 30, 33, 51}));
  EXPECT_EQ(enumerate(PowerParams(2, Base{-8})).u_set,
            (V{1, 11, 30, 38, 46, 53, 59, 62}));
  EXPECT_EQ(enumerate(PowerParams(2, Base{-10})).u_set,
            (V{1, 19, 29, 35, 46, 73, 75, 76, 146, 163}));
}

TEST(Enumerate, USetIsClosedAndPeriodic) {
  for (std::int64_t b = -2; b >= -12; --b) {
    const PowerParams p{2, Base{b}};
    const CycleAtlas atlas = enumerate(p);
    const std::set<std::int64_t> u(atlas.u_set.begin(), atlas.u_set.end());
    for (std::int64_t v : atlas.u_set) {
      EXPECT_TRUE(u.contains(power_sum(p, v))) << v << " base " << b;
    }
    for (std::int64_t f : atlas.fixed_points) {
      EXPECT_EQ(power_sum(p, f), f);
    }
    for (const auto& cycle : atlas.cycles) {
      EXPECT_GE(cycle.size(), 2u);
      for (std::size_t i = 0; i < cycle.size(); ++i) {
        EXPECT_EQ(power_sum(p, cycle[i]), cycle[(i + 1) % cycle.size()]);
      }
      // canonical rotation: minimum first; listed by minimum
      EXPECT_EQ(*std::min_element(cycle.begin(), cycle.end()), cycle.front());
    }
    // fixed points and cycles partition U
    std::size_t n = atlas.fixed_points.size();
    for (const auto& c : atlas.cycles) n += c.size();
    EXPECT_EQ(n, atlas.u_set.size());
    EXPECT_TRUE(u.contains(1));
  }
}

TEST(Enumerate, EveryStartFallsIntoU) {
  for (std::int64_t b : {-2, -5, -8}) {
    const PowerParams p{2, Base{b}};
    const CycleAtlas atlas = enumerate(p);
    const std::set<std::int64_t> u(atlas.u_set.begin(), atlas.u_set.end());
    for (std::int64_t a = 1; a <= threshold(Base{b}); ++a) {
      std::int64_t v = a;
      int guard = 0;
      while (!u.contains(v)) {
        v = power_sum(p, v);
        ASSERT_LT(++guard, 1000);
      }
    }
  }
}

TEST(Enumerate, ScanEndpointsCorroborated) {
  for (std::int64_t b = -2; b >= -10; --b) {
    const PowerParams p{2, Base{b}};
    const CycleAtlas atlas = enumerate(p);
    EXPECT_TRUE(is_happy(p, atlas.smallest_happy_gt1));
    for (std::int64_t a = 2; a < atlas.smallest_happy_gt1; ++a) {
      EXPECT_FALSE(is_happy(p, a)) << a << " base " << b;
    }
    ASSERT_TRUE(atlas.largest_negative_happy);
    EXPECT_TRUE(is_happy(p, *atlas.largest_negative_happy));
    for (std::int64_t a = -1; a > *atlas.largest_negative_happy; --a) {
      EXPECT_FALSE(is_happy(p, a)) << a << " base " << b;
    }
  }
}

TEST(Enumerate, NegativeFloorReportsHonestAbsence) {
  AtlasOptions opts;
  opts.negative_floor = -1;  // too shallow: -4's largest negative happy is -4
  const CycleAtlas atlas = enumerate(PowerParams(2, Base{-4}), opts);
  EXPECT_FALSE(atlas.largest_negative_happy);
}

TEST(Enumerate, HigherExponentNeedsExplicitBound) {
  EXPECT_THROW(enumerate(PowerParams(3, Base{-4})), std::invalid_argument);
  AtlasOptions opts;
  opts.search_bound = 400;
  const CycleAtlas atlas = enumerate(PowerParams(3, Base{-4}), opts);
  const PowerParams p{3, Base{-4}};
  EXPECT_TRUE(std::binary_search(atlas.fixed_points.begin(),
                                 atlas.fixed_points.end(), 1));
  for (std::int64_t v : atlas.u_set) {
    EXPECT_TRUE(std::binary_search(atlas.u_set.begin(), atlas.u_set.end(),
                                   power_sum(p, v)));
  }
}

TEST(Enumerate, OffTableRowsStayFrozen) {
  const json expected = load_fixture("atlas_offtable.json");
  for (const auto& row : expected) {
    const std::int64_t b = row.at("base").get<std::int64_t>();
    const CycleAtlas atlas = enumerate(PowerParams(2, Base{b}));
    EXPECT_EQ(json(atlas), row) << "base " << b;
  }
}

TEST(Atlas, InU) {
  const CycleAtlas atlas = enumerate(PowerParams(2, Base{-5}));
  EXPECT_TRUE(atlas.in_u(1));
  EXPECT_TRUE(atlas.in_u(17));
  EXPECT_FALSE(atlas.in_u(7));
  EXPECT_FALSE(atlas.in_u(-1));
}

TEST(Atlas, SameUpToRotation) {
  const CycleAtlas a = enumerate(PowerParams(2, Base{-5}));
  CycleAtlas b = a;
  for (auto& cycle : b.cycles) {
    std::rotate(cycle.begin(), cycle.begin() + 1, cycle.end());
  }
  EXPECT_TRUE(same_up_to_rotation(a, b));
  b.cycles[0][0] += 1;
  EXPECT_FALSE(same_up_to_rotation(a, b));
}

TEST(Atlas, RenderRowCyclesAndTable) {
  EXPECT_EQ(render_row_cycles(enumerate(PowerParams(2, Base{-2}))), "None");
  EXPECT_EQ(render_row_cycles(enumerate(PowerParams(2, Base{-8}))),
            "(11,59), (30,62,38,53)");
  const std::string table = render_table(atlas_range(-3, -2));
  EXPECT_NE(table.find("Base"), std::string::npos);
  EXPECT_NE(table.find("-3"), std::string::npos);
  EXPECT_NE(table.find("(2,4,6)"), std::string::npos);
}

TEST(Atlas, JsonRoundTrip) {
  const CycleAtlas atlas = enumerate(PowerParams(2, Base{-7}));
  const json j(atlas);
  const CycleAtlas back = j.get<CycleAtlas>();
  EXPECT_EQ(back.u_set, atlas.u_set);
  EXPECT_EQ(back.cycles, atlas.cycles);
  EXPECT_EQ(back.fixed_points, atlas.fixed_points);
  EXPECT_EQ(back.largest_negative_happy, atlas.largest_negative_happy);
}

}  // namespace
}  // namespace neghappy
