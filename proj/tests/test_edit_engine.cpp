#include <algorithm>
#include <set>

#include "doctest.h"
#include "json.hpp"
#include "notchkit/projection.hpp"
#include "notchkit/workspace.hpp"
#include "oracles.hpp"

using namespace notchkit;
using Site = DropTarget::Site;

namespace {

const Palette& P() { return default_palette(); }

struct Built {
  Workspace w = empty_workspace(default_palette());
  InstanceId add(std::string_view def, Position at = {}) {
    auto [next, id] = instantiate(default_palette(), w, def, at);
    w = std::move(next);
    return id;
  }
  void snap(InstanceId dragged, DropTarget t) { w = attach(default_palette(), w, dragged, t); }
};

EditErrc edit_error(auto&& f) {
  try {
    f();
  } catch (const EditError& e) {
    return e.code();
  }
  FAIL("no error");
  return EditErrc::SchemaError;
}

std::set<DropTarget> as_set(const std::vector<DropTarget>& v) { return {v.begin(), v.end()}; }

}  // namespace

TEST_SUITE("edit-engine") {

TEST_CASE("a comparison dragged over a while offers only the condition") {
  Built b;
  const InstanceId loop = b.add("while");
  const InstanceId cmp = b.add("less_than", {200, 0});
  CHECK(as_set(drop_targets(P(), b.w, cmp)) == std::set<DropTarget>{{loop, Site::ValueSocket, 0}});
}

TEST_CASE("a boolean may also go into Any sockets but never Number ones") {
  Built b;
  const InstanceId say = b.add("say");
  const InstanceId plus = b.add("plus", {0, 100});
  const InstanceId cmp = b.add("less_than", {200, 0});
  const auto targets = as_set(drop_targets(P(), b.w, cmp));
  CHECK(targets.count({say, Site::ValueSocket, 0}) == 1);
  CHECK(targets.count({plus, Site::ValueSocket, 0}) == 0);
}

TEST_CASE("a command is offered stack positions and slots, never value sockets") {
  Built b;
  b.add("plus");
  b.add("less_than", {0, 100});
  const InstanceId say = b.add("say", {200, 0});
  CHECK(drop_targets(P(), b.w, say).empty());

  const InstanceId rep = b.add("repeat", {0, 300});
  for (const auto& t : drop_targets(P(), b.w, say)) CHECK(t.site != Site::ValueSocket);
  CHECK(as_set(drop_targets(P(), b.w, say)) ==
        std::set<DropTarget>{{rep, Site::ContainerSlot, 1}, {rep, Site::BelowInStack, 0}, {rep, Site::AboveInStack, 0}});
}

TEST_CASE("attaching a condition merges two islands") {
  Built b;
  const InstanceId loop = b.add("while");
  const InstanceId cmp = b.add("less_than", {200, 0});
  REQUIRE(b.w.islands.size() == 2);
  b.snap(cmp, {loop, Site::ValueSocket, 0});
  CHECK(b.w.islands.size() == 1);
  CHECK(find_block(b.w, loop)->sockets[0].blocks[0].id == cmp);
  CHECK(check_invariants(P(), b.w).empty());
}

TEST_CASE("attaching into an occupied socket ejects the occupant") {
  Built b;
  const InstanceId host = b.add("plus", {10, 20});
  const InstanceId first = b.add("number", {200, 0});
  const InstanceId second = b.add("times", {300, 0});
  b.snap(first, {host, Site::ValueSocket, 0});
  REQUIRE(b.w.islands.size() == 2);
  b.snap(second, {host, Site::ValueSocket, 0});
  CHECK(b.w.islands.size() == 2);
  CHECK(find_block(b.w, host)->sockets[0].blocks[0].id == second);
  const auto ejected = island_of_root(b.w, first);
  REQUIRE(ejected);
  CHECK(b.w.islands[*ejected].position == Position{10 + kEjectOffset.x, 20 + kEjectOffset.y});
  CHECK(block_count(b.w) == 3);
}

TEST_CASE("a command into a number socket is a shape mismatch") {
  Built b;
  const InstanceId host = b.add("plus");
  const InstanceId say = b.add("say", {200, 0});
  const Workspace before = b.w;
  CHECK(edit_error([&] { attach(P(), b.w, say, {host, Site::ValueSocket, 0}); }) == EditErrc::ShapeMismatch);
  CHECK(structurally_equal(P(), b.w, before));
}

TEST_CASE("an island cannot snap into itself") {
  Built b;
  const InstanceId rep = b.add("repeat");
  const InstanceId inner = b.add("say", {200, 0});
  b.snap(inner, {rep, Site::ContainerSlot, 1});
  CHECK(edit_error([&] { attach(P(), b.w, rep, {inner, Site::BelowInStack, 0}); }) == EditErrc::WouldCreateCycle);
}

TEST_CASE("unknown ids and sites") {
  Built b;
  const InstanceId say = b.add("say");
  const InstanceId n = b.add("number", {100, 0});
  CHECK(edit_error([&] { attach(P(), b.w, 999, {say, Site::ValueSocket, 0}); }) == EditErrc::UnknownInstance);
  CHECK(edit_error([&] { attach(P(), b.w, n, {999, Site::ValueSocket, 0}); }) == EditErrc::UnknownTarget);
  CHECK(edit_error([&] { attach(P(), b.w, n, {say, Site::ValueSocket, 5}); }) == EditErrc::UnknownTarget);
  CHECK(edit_error([&] { detach(b.w, 999, {}); }) == EditErrc::UnknownInstance);
  const InstanceId m = b.add("move_forward", {0, 200});
  CHECK(edit_error([&] { attach(P(), b.w, m, {say, Site::BelowInStack, 1}); }) == EditErrc::UnknownTarget);
}

TEST_CASE("a detached condition leaves the default showing") {
  Built b;
  const InstanceId loop = b.add("while");
  const InstanceId cmp = b.add("less_than", {200, 0});
  b.snap(cmp, {loop, Site::ValueSocket, 0});
  const Workspace w = detach(b.w, cmp, {50, 50});
  CHECK(w.islands.size() == 2);
  CHECK(find_block(w, loop)->sockets[0].empty());
  CHECK(textify(P(), w) == "while (true) {\n}\n");
}

TEST_CASE("detaching from the middle of a stack takes everything below") {
  Built b;
  const InstanceId a = b.add("say");
  const InstanceId m = b.add("move_forward", {0, 100});
  const InstanceId c = b.add("play_note", {0, 200});
  b.snap(m, {a, Site::BelowInStack, 0});
  b.snap(c, {m, Site::BelowInStack, 0});
  REQUIRE(b.w.islands.size() == 1);
  const Workspace w = detach(b.w, m, {300, 0});
  REQUIRE(w.islands.size() == 2);
  const auto moved = island_of_root(w, m);
  REQUIRE(moved);
  CHECK(w.islands[*moved].stack.size() == 2);
  CHECK(w.islands[*moved].stack[1].id == c);
}

TEST_CASE("detaching an island root is the identity") {
  Built b;
  const InstanceId a = b.add("say", {5, 5});
  CHECK(structurally_equal(P(), detach(b.w, a, {99, 99}), b.w));
}

TEST_CASE("above and below insertion order") {
  Built b;
  const InstanceId a = b.add("say");
  const InstanceId top = b.add("move_forward", {0, 100});
  const InstanceId bottom = b.add("play_note", {0, 200});
  b.snap(top, {a, Site::AboveInStack, 0});
  b.snap(bottom, {a, Site::BelowInStack, 0});
  const auto& stack = b.w.islands[*island_of_root(b.w, top)].stack;
  REQUIRE(stack.size() == 3);
  CHECK(stack[0].id == top);
  CHECK(stack[1].id == a);
  CHECK(stack[2].id == bottom);
}

TEST_CASE("set_socket_value checks shape, dropdown and occupancy") {
  Built b;
  const InstanceId note = b.add("play_note");
  const InstanceId loop = b.add("while", {0, 100});
  const InstanceId plus = b.add("plus", {0, 200});
  const InstanceId n = b.add("number", {0, 300});

  const Workspace ok = set_socket_value(P(), b.w, note, 0, Literal{60.0});
  CHECK(literal_equal(*find_block(ok, note)->sockets[0].literal, Literal{60.0}));
  CHECK(edit_error([&] { set_socket_value(P(), b.w, note, 0, Literal{61.0}); }) == EditErrc::NotInDropdown);
  CHECK(edit_error([&] { set_socket_value(P(), b.w, loop, 0, Literal{std::string("maybe")}); }) ==
        EditErrc::ValueViolatesShape);
  CHECK(edit_error([&] { set_socket_value(P(), b.w, note, 1, Literal{true}); }) == EditErrc::ValueViolatesShape);
  CHECK(edit_error([&] { set_socket_value(P(), b.w, note, 7, Literal{1.0}); }) == EditErrc::UnknownTarget);
  CHECK(edit_error([&] { set_socket_value(P(), b.w, loop, 1, Literal{1.0}); }) == EditErrc::UnknownTarget);

  b.snap(n, {plus, Site::ValueSocket, 0});
  CHECK(edit_error([&] { set_socket_value(P(), b.w, plus, 0, Literal{2.0}); }) == EditErrc::SocketOccupied);
}

TEST_CASE("identifier sockets take only names") {
  Built b;
  const InstanceId var = b.add("variable");
  CHECK(edit_error([&] { set_socket_value(P(), b.w, var, 0, Literal{std::string("two words")}); }) ==
        EditErrc::ValueViolatesShape);
  CHECK_NOTHROW(set_socket_value(P(), b.w, var, 0, Literal{std::string("count")}));
}

TEST_CASE("drop_targets agrees with the brute-force oracle") {
  testing::Rng rng(17);
  for (int i = 0; i < 150; ++i) {
    const Workspace w = testing::random_workspace(rng, P(), 30);
    for (const auto& island : w.islands) {
      const InstanceId root = island.stack[0].id;
      const auto fast = drop_targets(P(), w, root);
      CHECK(fast.size() == as_set(fast).size());
      CHECK(as_set(fast) == testing::brute_force_drop_targets(P(), w, root));
    }
  }
}

TEST_CASE("random edit sequences keep the workspace sound") {
  testing::Rng rng(23);
  for (int i = 0; i < 200; ++i) {
    Workspace w = testing::random_workspace(rng, P(), 15);
    const std::size_t blocks = block_count(w);
    for (int k = 0; k < 20; ++k) {
      w = testing::random_edit(rng, P(), w);
      REQUIRE(check_invariants(P(), w).empty());
      CHECK(block_count(w) == blocks);
    }
  }
}

TEST_CASE("save and load an empty workspace") {
  const Workspace w = empty_workspace(P());
  CHECK(structurally_equal(P(), load_workspace(P(), save_workspace(w)), w));
}

TEST_CASE("save and load nested islands") {
  Built b;
  const InstanceId rep = b.add("repeat", {10, 10});
  const InstanceId say = b.add("say", {0, 100});
  const InstanceId plus = b.add("plus", {0, 200});
  b.add("less_than", {300, 300});
  b.snap(say, {rep, Site::ContainerSlot, 1});
  b.snap(plus, {say, Site::ValueSocket, 0});
  b.w = set_socket_value(P(), b.w, plus, 1, Literal{4.5});
  const Workspace loaded = load_workspace(P(), save_workspace(b.w));
  CHECK(structurally_equal(P(), loaded, b.w));
  CHECK(loaded.islands.size() == 2);
}

TEST_CASE("load rejects bad documents") {
  Built b;
  b.add("say");
  auto doc = nlohmann::json::parse(save_workspace(b.w));

  auto unknown = doc;
  unknown["islands"][0]["root"]["definition_id"] = "fly";
  CHECK(edit_error([&] { load_workspace(P(), unknown.dump()); }) == EditErrc::SchemaError);

  auto version = doc;
  version["palette_version"] = "someone-else-7";
  CHECK(edit_error([&] { load_workspace(P(), version.dump()); }) == EditErrc::PaletteVersionMismatch);

  auto schema = doc;
  schema["schema_version"] = 99;
  CHECK(edit_error([&] { load_workspace(P(), schema.dump()); }) == EditErrc::SchemaError);

  CHECK(edit_error([&] { load_workspace(P(), "{"); }) == EditErrc::SchemaError);
}

TEST_CASE("save and load fuzz") {
  testing::Rng rng(31);
  for (int i = 0; i < 200; ++i) {
    const Workspace w = testing::random_workspace(rng, P(), 30);
    CHECK(structurally_equal(P(), load_workspace(P(), save_workspace(w)), w));
  }
}

TEST_CASE("projected workspaces save and load too") {
  const BlockTree w = switch_to_blocks(P(), "var x = 2;\nrepeat (x) {\n  say(x + 1);\n}\n", ChunkLevel::Clauses);
  CHECK(structurally_equal(P(), load_workspace(P(), save_workspace(w, true)), w));
}

}  // TEST_SUITE
