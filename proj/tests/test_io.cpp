#include <gtest/gtest.h>

#include <random>

#include "budgeted_efx/errors.hpp"
#include "budgeted_efx/io.hpp"
#include "support.hpp"

using namespace budgeted_efx;
using testing_support::r;

namespace {

std::string parse_error(const std::string& text) {
  try {
    instance_from_json(Json::parse(text));
  } catch (const ParseError& e) {
    return e.what();
  } catch (const StructuralError& e) {
    return std::string("structural: ") + e.what();
  }
  return "";
}

}  // namespace

TEST(Io, LoadsT1Fixture) {
  const Instance inst = load_instance(testing_support::data_dir() / "t1.json");
  const Instance expected = testing_support::t1();
  EXPECT_EQ(inst.costs(), expected.costs());
  for (AgentId i = 0; i < 2; ++i) {
    EXPECT_EQ(inst.budget(i), expected.budget(i));
    EXPECT_EQ(inst.agents()[i].values, expected.agents()[i].values);
  }
}

TEST(Io, RationalsAcceptIntegersAndReduceFractions) {
  EXPECT_EQ(rational_from_json(Json("3/6"), "x"), r(1, 2));
  EXPECT_EQ(rational_from_json(Json(4), "x"), r(4));
  EXPECT_EQ(rational_to_json(r(3, 6)), Json("1/2"));
  EXPECT_THROW(rational_from_json(Json(0.5), "x"), ParseError);
  EXPECT_THROW(rational_from_json(Json("1/0"), "x"), ParseError);
}

TEST(Io, RoundTripIsCanonical) {
  std::mt19937_64 rng(97);
  testing_support::RandomSpec spec;
  spec.m_min = 0;
  spec.m_max = 9;
  spec.fractional = true;
  spec.zero_cost_probability = 0.2;
  for (int trial = 0; trial < 200; ++trial) {
    spec.n = 1 + static_cast<std::size_t>(trial % 4);
    const Instance inst = testing_support::random_instance(rng, spec);
    const std::string text = serialize_instance(inst);
    const Instance back = instance_from_json(Json::parse(text));
    ASSERT_EQ(serialize_instance(back), text);
    ASSERT_EQ(back.costs(), inst.costs());
    ASSERT_EQ(text.back(), '\n');
  }
}

TEST(Io, ErrorsNameTheirLocation) {
  EXPECT_NE(parse_error(R"({"goods": [{"id": 0, "cost": "1"}], "agents": [{"id": 0, "budget": "1", "values": ["x"]}]})")
                .find("agents[0].values[0]"),
            std::string::npos);
  EXPECT_NE(parse_error(R"({"goods": [{"id": 1, "cost": "1"}], "agents": []})").find("goods[0]"),
            std::string::npos);
  EXPECT_NE(parse_error(R"({"agents": []})").find("goods"), std::string::npos);
  EXPECT_NE(parse_error(R"({"goods": [{"id": 0, "cost": "1"}], "agents": [{"id": 0, "budget": "1", "values": ["1", "2"]}]})"),
            "");
  EXPECT_NE(parse_error(R"({"goods": [{"id": 0, "cost": "-1"}], "agents": []})"), "");
}

TEST(Io, AllocationsFromBareObjectOrReport) {
  const Instance inst = testing_support::t1();
  const Allocation a = allocation_from_json(Json::parse(R"({"bundles": [[0, 1], [2]]})"), inst);
  EXPECT_EQ(a.bundle(0), (Bundle{0, 1}));
  const Allocation b =
      allocation_from_json(Json::parse(R"({"allocation": {"bundles": [[0], [1]]}, "ok": true})"), inst);
  EXPECT_EQ(b.unallocated(), Bundle{2});
  EXPECT_EQ(allocation_to_json(b), Json::parse(R"({"bundles": [[0], [1]], "unallocated": [2]})"));
  EXPECT_ANY_THROW(allocation_from_json(Json::parse(R"({"bundles": [[0], [0]]})"), inst));
  EXPECT_ANY_THROW(allocation_from_json(Json::parse(R"({"bundles": [[0]]})"), inst));
  EXPECT_ANY_THROW(allocation_from_json(Json::parse(R"({"bundles": [[0], [7]]})"), inst));
}

TEST(Io, CorpusRoundTrip) {
  const std::vector<Instance> corpus{testing_support::t1(), testing_support::t1().with_budget(0, r(2))};
  const std::vector<Instance> back = corpus_from_json(corpus_to_json(corpus));
  ASSERT_EQ(back.size(), 2U);
  EXPECT_EQ(back[1].budget(0), r(2));
}

TEST(Io, Sha256KnownVector) {
  EXPECT_EQ(sha256_hex("abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}
