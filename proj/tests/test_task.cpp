#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <array>
#include <vector>

#include "ctcog/task.hpp"

#include "helpers.hpp"

using namespace ctcog;
using testutil::raises;

namespace {

struct Coin {
  Substrate s = Substrate::classical("coin", {"head", "tail"});
  Attribute head = Attribute::classical(s, {"head"}, "head");
  Attribute tail = Attribute::classical(s, {"tail"}, "tail");
  Variable outcome = make_variable(s, {head, tail}, "outcome");
};

struct Lamp {
  Substrate s = Substrate::classical("lamp", {"red", "amber", "green"});
  std::vector<Attribute> colors = {Attribute::classical(s, {"red"}, "red"),
                                   Attribute::classical(s, {"amber"}, "amber"),
                                   Attribute::classical(s, {"green"}, "green")};
  Variable color = make_variable(s, colors, "color");
};

Variable label_variable(std::size_t n, const std::string& prefix) {
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < n; ++i) labels.push_back(prefix + std::to_string(i));
  Substrate s = Substrate::classical(prefix, labels);
  std::vector<Attribute> attrs;
  for (const std::string& l : labels) attrs.push_back(Attribute::classical(s, {l}, l));
  return make_variable(s, attrs, prefix);
}

}  // namespace

TEST_CASE("task construction") {
  Coin c;
  Task fix = make_task({{c.head, c.head}, {c.tail, c.head}}, "fix_head");
  CHECK(fix.size() == 2);
  CHECK(fix.label() == "fix_head");
  CHECK(fix.family() == TaskFamily::General);

  Task id = identity_task(c.outcome);
  CHECK(id.size() == 2);
  CHECK(id.family() == TaskFamily::Identity);
  CHECK(relation_equal(id, make_task({{c.head, c.head}, {c.tail, c.tail}}, "manual")));

  Attribute both = Attribute::classical(c.s, {"head", "tail"}, "both");
  CHECK(raises(Errc::AmbiguousInputs,
               [&] { make_task({{c.head, c.head}, {both, c.tail}}, "clash"); }));
  CHECK(raises(Errc::EmptyTask, [&] { make_task({}, "nothing"); }));
  CHECK(raises(Errc::EmptyAttribute,
               [&] { make_task({{Attribute::empty(c.s), c.head}}, "blank_in"); }));
}

TEST_CASE("reversible computation") {
  Coin c;
  std::array<std::size_t, 2> swap_perm = {1, 0};
  Task swap = reversible_computation(c.outcome, swap_perm);
  CHECK(swap.size() == 2);
  CHECK(swap.pairs()[0].first == c.head);
  CHECK(swap.pairs()[0].second == c.tail);

  std::array<std::size_t, 2> id_perm = {0, 1};
  CHECK(relation_equal(reversible_computation(c.outcome, id_perm), identity_task(c.outcome)));

  Lamp l;
  std::array<std::size_t, 3> cycle = {1, 2, 0};
  Task rot = reversible_computation(l.color, cycle);
  Task thrice = serial(serial(rot, rot).flatten(), rot).flatten();
  CHECK(relation_equal(thrice, identity_task(l.color)));

  std::array<std::size_t, 3> repeat = {0, 0, 1};
  CHECK(raises(Errc::NotAPermutation, [&] { reversible_computation(l.color, repeat); }));
  std::array<std::size_t, 2> short_perm = {0, 1};
  CHECK(raises(Errc::NotAPermutation, [&] { reversible_computation(l.color, short_perm); }));
  Variable single = make_variable(c.s, {c.head}, "single");
  std::array<std::size_t, 1> unit = {0};
  CHECK(raises(Errc::TooFewAttributes, [&] { reversible_computation(single, unit); }));
}

TEST_CASE("serial and parallel composition") {
  Coin c;
  std::array<std::size_t, 2> swap_perm = {1, 0};
  Task swap = reversible_computation(c.outcome, swap_perm);
  CHECK(relation_equal(serial(swap, swap).flatten(), identity_task(c.outcome)));

  Task both = parallel(identity_task(c.outcome), swap).flatten();
  CHECK(both.size() == 4);
  CHECK(both.input_substrate().size() == 4);
  bool found = false;
  for (const auto& [in, out] : both.pairs())
    if (in == product_attribute(c.head, c.head) && out == product_attribute(c.head, c.tail))
      found = true;
  CHECK(found);

  Lamp l;
  CHECK(raises(Errc::SubstrateMismatch,
               [&] { serial(identity_task(c.outcome), identity_task(l.color)); }));
}

TEST_CASE("cloning tasks") {
  Coin c;
  Task clone = cloning_task(c.outcome, c.head);
  CHECK(clone.family() == TaskFamily::Cloning);
  REQUIRE(clone.size() == 2);
  CHECK(clone.pairs()[0].first == product_attribute(c.head, c.head));
  CHECK(clone.pairs()[0].second == product_attribute(c.head, c.head));
  CHECK(clone.pairs()[1].first == product_attribute(c.tail, c.head));
  CHECK(clone.pairs()[1].second == product_attribute(c.tail, c.tail));
  REQUIRE(clone.source().has_value());
  CHECK(clone.source()->size() == 2);

  Variable single = make_variable(c.s, {c.head}, "single");
  CHECK(cloning_task(single, c.head).size() == 1);

  Substrate q = Substrate::quantum("qubit", 2);
  Attribute z0 = Attribute::span(q, {la::qubit_at_angle(0)}, "z0");
  Attribute d45 = Attribute::span(q, {la::qubit_at_angle(45)}, "d45");
  Variable nonortho = make_variable(q, {z0, d45}, "tilted");
  Task qclone = cloning_task(nonortho, z0);
  CHECK(qclone.size() == 2);
  CHECK(qclone.input_substrate().size() == 4);

  Lamp l;
  CHECK(raises(Errc::SubstrateMismatch, [&] { cloning_task(c.outcome, l.colors[0]); }));
}

TEST_CASE("distinguishing tasks") {
  Lamp l;
  Variable pos = label_variable(3, "pos");
  Task dist = distinguishing_task(l.color, pos);
  CHECK(dist.family() == TaskFamily::Distinguishing);
  REQUIRE(dist.size() == 3);
  CHECK(dist.pairs()[1].first == l.colors[1]);
  CHECK(dist.pairs()[1].second == pos.at(1));
  CHECK(dist.output_substrate().name() == "pos");

  Coin c;
  CHECK(raises(Errc::LabelCountMismatch, [&] { distinguishing_task(c.outcome, pos); }));
}

TEST_CASE("measuring tasks") {
  Coin c;
  Variable labels = label_variable(2, "tick");
  Attribute blank = labels.at(0);
  Task meas = measuring_task(c.outcome, blank, labels);
  CHECK(meas.family() == TaskFamily::Measuring);
  REQUIRE(meas.size() == 2);
  CHECK(meas.pairs()[0].first == product_attribute(c.head, blank));
  CHECK(meas.pairs()[0].second == product_attribute(c.head, labels.at(0)));
  CHECK(meas.pairs()[1].first == product_attribute(c.tail, blank));
  CHECK(meas.pairs()[1].second == product_attribute(c.tail, labels.at(1)));

  Variable single = make_variable(c.s, {c.head}, "single");
  Variable one_label = label_variable(1, "dot");
  CHECK(measuring_task(single, one_label.at(0), one_label).size() == 1);

  CHECK(raises(Errc::SubstrateMismatch,
               [&] { measuring_task(c.outcome, c.head, labels); }));
}

TEST_CASE("preparation tasks") {
  Coin c;
  Variable labels = label_variable(2, "order");
  Task prep = preparation_task(c.outcome, c.head, labels);
  CHECK(prep.family() == TaskFamily::Preparation);
  REQUIRE(prep.size() == c.outcome.size());
  CHECK(prep.pairs()[0].first == product_attribute(labels.at(0), c.head));
  CHECK(prep.pairs()[0].second == product_attribute(labels.at(0), c.head));
  CHECK(prep.pairs()[1].first == product_attribute(labels.at(1), c.head));
  CHECK(prep.pairs()[1].second == product_attribute(labels.at(1), c.tail));

  CHECK(raises(Errc::SubstrateMismatch,
               [&] { preparation_task(c.outcome, labels.at(0), labels); }));
  Variable three = label_variable(3, "sel");
  CHECK(raises(Errc::LabelCountMismatch, [&] { preparation_task(c.outcome, c.head, three); }));
}

TEST_CASE("transpose") {
  Coin c;
  std::array<std::size_t, 2> swap_perm = {1, 0};
  Task swap = reversible_computation(c.outcome, swap_perm);
  CHECK(relation_equal(transpose(swap), swap));
  CHECK(relation_equal(transpose(transpose(swap)), swap));
  CHECK(relation_equal(transpose(identity_task(c.outcome)), identity_task(c.outcome)));
  CHECK(transpose(swap).label() == swap.label() + "~");

  Task fix = make_task({{c.head, c.head}, {c.tail, c.head}}, "fix_head");
  CHECK(raises(Errc::AmbiguousInputs, [&] { transpose(fix); }));
}

TEST_CASE("composition laws") {
  SplitMix64 rng(404);
  Lamp l;
  for (int trial = 0; trial < 25; ++trial) {
    std::vector<std::size_t> pa = {0, 1, 2}, pb = {0, 1, 2}, pc = {0, 1, 2};
    for (auto* p : {&pa, &pb, &pc})
      for (std::size_t i = 2; i > 0; --i) std::swap((*p)[i], (*p)[rng.next() % (i + 1)]);
    Task a = reversible_computation(l.color, pa);
    Task b = reversible_computation(l.color, pb);
    Task c = reversible_computation(l.color, pc);
    Task left = serial(serial(a, b).flatten(), c).flatten();
    Task right = serial(a, serial(b, c).flatten()).flatten();
    CHECK(relation_equal(left, right));

    Task id = identity_task(l.color);
    CHECK(relation_equal(serial(id, a).flatten(), a));
    CHECK(relation_equal(serial(a, id).flatten(), a));

    std::vector<std::size_t> inverse(3);
    for (std::size_t i = 0; i < 3; ++i) inverse[pa[i]] = i;
    Task undo = reversible_computation(l.color, inverse);
    CHECK(relation_equal(serial(a, undo).flatten(), id));
  }

  for (std::size_t n = 1; n <= 5; ++n) {
    Variable v = label_variable(n, "v");
    CHECK(cloning_task(v, v.at(0)).size() == n);
  }
}
