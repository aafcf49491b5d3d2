#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "padt/dendrogram.hpp"

using namespace padt;

namespace {

// v -(1)- F{x7,x8}; v -(2)- A; A -(3)- D{x3} -(1)- E{x1,x2}; A -(1)- B{x6} -(1)- C{x4,x5}
ProjectiveDendrogram::Builder eight_point_builder() {
  ProjectiveDendrogram::Builder b;
  for (const char* id : {"v", "F", "A", "D", "E", "B", "C"}) b.add_vertex(id);
  b.add_edge("v", "F", 1).add_edge("v", "A", 2).add_edge("A", "D", 3).add_edge("D", "E", 1);
  b.add_edge("A", "B", 1).add_edge("B", "C", 1);
  b.add_leaf("E", "x1").add_leaf("E", "x2").add_leaf("D", "x3").add_leaf("C", "x4").add_leaf("C", "x5");
  b.add_leaf("B", "x6").add_leaf("F", "x7").add_leaf("F", "x8");
  b.set_root("v").set_infinity_at("v");
  return b;
}

}  // namespace

TEST(Dendrogram, StructureOfEightPointTree) {
  auto b = eight_point_builder();
  b.set_child_order("v", {"A", "F"}).set_child_order("A", {"D", "B"});
  const ProjectiveDendrogram d = b.build();
  EXPECT_EQ(d.vertex_count(), 7u);
  EXPECT_EQ(d.internal_edges().size(), 6u);
  EXPECT_EQ(d.leaves().size(), 8u);
  EXPECT_TRUE(d.is_binary());
  EXPECT_TRUE(d.is_stable());
  EXPECT_EQ(d.order_data(), (std::vector<std::string>{"x1", "x2", "x3", "x4", "x5", "x6", "x7", "x8"}));
  const std::vector<int> level = d.levels();
  EXPECT_EQ(level[*d.find_vertex("E")], 6);
  EXPECT_EQ(level[*d.find_vertex("C")], 4);
  EXPECT_EQ(level[*d.find_vertex("F")], 1);
}

TEST(Dendrogram, DefaultOrderUsesSmallestLabel) {
  const ProjectiveDendrogram d = eight_point_builder().build();
  // A holds x1, F holds x7
  EXPECT_EQ(d.vertex_id(d.children(d.root())[0].index), "A");
  EXPECT_EQ(d.labels_below(*d.find_vertex("B")), (std::vector<std::string>{"x4", "x5", "x6"}));
}

TEST(Dendrogram, FlagGraphIsTreeWithOneEndPerDatumAndInfinity) {
  const FlagGraph g = eight_point_builder().build().to_flag_graph();
  EXPECT_TRUE(g.is_tree());
  EXPECT_EQ(g.edges().unbounded.size(), 9u);
}

TEST(Dendrogram, CanonicalFormIgnoresOrderAndIds) {
  auto b = eight_point_builder();
  b.set_child_order("v", {"F", "A"});
  EXPECT_EQ(canonical_form(b.build()), canonical_form(eight_point_builder().build()));
  EXPECT_EQ(canonical_form(eight_point_builder().build()),
            "(1:('x7','x8'),2:(1:('x6',1:('x4','x5')),3:('x3',1:('x1','x2'))))");
}

TEST(Dendrogram, LengthsMatterForIsometry) {
  ProjectiveDendrogram::Builder a;
  a.add_vertex("r").add_vertex("s").add_edge("r", "s", 2).add_leaf("r", "x").add_leaf("s", "y").add_leaf("s", "z");
  a.set_root("r");
  ProjectiveDendrogram::Builder b;
  b.add_vertex("r").add_vertex("s").add_edge("r", "s", 3).add_leaf("r", "x").add_leaf("s", "y").add_leaf("s", "z");
  b.set_root("r");
  EXPECT_FALSE(isometric(a.build(), b.build()));
}

TEST(Dendrogram, StabilizeSumsChains) {
  ProjectiveDendrogram::Builder b;
  b.add_vertex("r").add_vertex("m").add_vertex("s");
  b.add_edge("r", "m", 2).add_edge("m", "s", 3);
  b.add_leaf("r", "x").add_leaf("s", "y").add_leaf("s", "z").set_root("r");
  EXPECT_THROW(b.build(), Error);
  const ProjectiveDendrogram chain = b.build(false);
  const ProjectiveDendrogram st = stabilize(chain);
  EXPECT_TRUE(st.is_stable());
  EXPECT_EQ(canonical_form(st), "('x',5:('y','z'))");
}

TEST(Dendrogram, StabilizeMovesInfinityDown) {
  ProjectiveDendrogram::Builder b;
  b.add_vertex("r").add_vertex("s").add_edge("r", "s", 4).add_leaf("s", "y").add_leaf("s", "z").set_root("r");
  const ProjectiveDendrogram st = stabilize(b.build(false));
  EXPECT_EQ(st.vertex_count(), 1u);
  EXPECT_EQ(canonical_form(st), "('y','z')");
}

TEST(Dendrogram, RejectsMalformedInput) {
  {
    auto b = eight_point_builder();
    b.add_edge("E", "C", 1);  // cycle
    EXPECT_THROW(b.build(), Error);
  }
  {
    auto b = eight_point_builder();
    b.add_leaf("F", "x1");
    EXPECT_THROW(b.build(), Error);
  }
  {
    auto b = eight_point_builder();
    b.set_infinity_at("A");
    EXPECT_THROW(b.build(), Error);
  }
  {
    auto b = eight_point_builder();
    b.set_child_order("v", {"A"});
    EXPECT_THROW(b.build(), Error);
  }
  {
    auto b = eight_point_builder();
    b.add_edge("v", "nowhere", 1);
    EXPECT_THROW(b.build(), Error);
  }
  {
    ProjectiveDendrogram::Builder b;
    b.add_vertex("r").add_vertex("s").add_edge("r", "s", 0).add_leaf("r", "x").add_leaf("s", "y").add_leaf("s", "z");
    b.set_root("r");
    EXPECT_THROW(b.build(), Error);
  }
}

TEST(Dendrogram, RandomTreesAreWellFormed) {
  std::mt19937 rng(5);
  for (int i = 0; i < 1000; ++i) {
    const std::size_t leaves = 2 + rng() % 31;
    const ProjectiveDendrogram d = oracle::random_dendrogram(rng, leaves, 2 + rng() % 4, 8);
    EXPECT_EQ(d.leaves().size(), leaves);
    EXPECT_TRUE(d.is_stable());
    EXPECT_TRUE(d.to_flag_graph().is_tree());
    EXPECT_EQ(stabilize(d).vertex_count(), d.vertex_count());
  }
}
