// Copyright 2026 The efgraph Authors.
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

#include <gtest/gtest.h>

#include <cstdio>
#include <fstream>
#include <random>

#include "efgraph/catalog.hpp"
#include "efgraph/error.hpp"
#include "efgraph/game_format.hpp"
#include "fuzz.hpp"

namespace efg {
namespace {

// The chance node, one deal and its betting, written the way a user would.
constexpr const char* kKuhnExcerpt = R"(# Kuhn poker, one deal expanded
num_players 2
node / chance actions JQ=0.1666666666666667 JK=0.1666666666666667 QJ=0.1666666666666667 QK=0.1666666666666667 KJ=0.1666666666666667 KQ=0.1666666666666666
node /C:JQ player 1 actions k b
node /C:JQ/P1:k player 2 actions k b
node /C:JQ/P1:k/P2:k leaf payoffs 1=-1 2=1
node /C:JQ/P1:k/P2:b player 1 actions f c
node /C:JQ/P1:k/P2:b/P1:f leaf payoffs 1=-1 2=1
node /C:JQ/P1:k/P2:b/P1:c leaf payoffs 1=-2 2=2
node /C:JQ/P1:b player 2 actions f c
node /C:JQ/P1:b/P2:f leaf payoffs 1=1 2=-1
node /C:JQ/P1:b/P2:c leaf payoffs 1=-2 2=2
)";

ParseError parse_error(const std::string& text) {
  try {
    parse_game_file(text);
  } catch (const ParseError& e) {
    return e;
  }
  ADD_FAILURE() << "no error for:\n" << text;
  return ParseError(ParseError::Kind::kSyntax, 0, "");
}

GameError build_error(const std::string& text) {
  try {
    build_tree(parse_game_file(text));
  } catch (const GameError& e) {
    return e;
  }
  ADD_FAILURE() << "no error for:\n" << text;
  return GameError(GameError::Kind::kInvalidArgument, "");
}

TEST(ParseGameFile, KuhnExcerpt) {
  const GameFileDocument doc = parse_game_file(kKuhnExcerpt);
  EXPECT_EQ(doc.num_players(), 2);
  int chance = 0, player = 0, leaf = 0;
  for (const auto& rec : doc.nodes) {
    switch (rec.kind) {
      case GameFileDocument::NodeRecord::Kind::kChance: ++chance; break;
      case GameFileDocument::NodeRecord::Kind::kPlayer: ++player; break;
      case GameFileDocument::NodeRecord::Kind::kLeaf: ++leaf; break;
    }
  }
  EXPECT_EQ(chance, 1);
  EXPECT_EQ(player, 4);
  EXPECT_EQ(leaf, 5);
  EXPECT_EQ(doc.nodes[0].actions,
            (std::vector<std::string>{"JQ", "JK", "QJ", "QK", "KJ", "KQ"}));
  EXPECT_EQ(doc.nodes[1].actions, (std::vector<std::string>{"k", "b"}));
  EXPECT_EQ(doc.nodes[0].line, 3);
}

TEST(ParseGameFile, SingleTerminal) {
  const auto doc = parse_game_file("num_players 2\nnode /root leaf payoffs 1=0 2=0\n");
  ASSERT_EQ(doc.nodes.size(), 1u);
  const GameTree tree = build_tree(doc);
  EXPECT_EQ(tree.nodes.size(), 1u);
  EXPECT_TRUE(tree.infosets.empty());
  EXPECT_EQ(tree.nodes[0].payoffs, (std::vector<double>{0.0, 0.0}));
}

TEST(ParseGameFile, CommentsBlankLinesAndHeaders) {
  const auto doc = parse_game_file(
      "\n# leading comment\nparameters\nnum_players 1   # trailing\nname demo game\n\n"
      "node / player 1 actions a b  # comment\n"
      "node /a leaf payoffs 1=1.5\nnode /b leaf payoffs 1=-2e-1\n");
  EXPECT_EQ(doc.parameter("name"), "demo game");
  EXPECT_EQ(doc.parameter("missing"), "");
  const GameTree tree = build_tree(doc);
  EXPECT_EQ(tree.name, "demo game");
  EXPECT_DOUBLE_EQ(tree.nodes[2].payoffs[0], -0.2);
}

TEST(ParseGameFile, Errors) {
  EXPECT_EQ(parse_error("node / leaf payoffs 1=0\n").kind(), ParseError::Kind::kMissingParameter);
  EXPECT_EQ(parse_error("node / leaf payoffs 1=0\n").line(), 1);
  EXPECT_EQ(parse_error("").kind(), ParseError::Kind::kMissingParameter);

  auto e = parse_error("num_players 1\nnode / player 1 actions a\nnode / leaf payoffs 1=0\n");
  EXPECT_EQ(e.kind(), ParseError::Kind::kDuplicateName);
  EXPECT_EQ(e.line(), 3);

  e = parse_error("num_players 1\nnode / player 1 actions a\ninfoset I nodes /\ninfoset I nodes /\n");
  EXPECT_EQ(e.kind(), ParseError::Kind::kDuplicateName);
  EXPECT_EQ(e.line(), 4);

  e = parse_error("num_players 1\nnode / player 1 actions a\ninfoset I nodes /nowhere\n");
  EXPECT_EQ(e.kind(), ParseError::Kind::kUnknownNode);
  EXPECT_EQ(e.line(), 3);

  for (const char* bad : {
           "num_players 1\nnode / chance actions a=1/6\n",
           "num_players 1\nnode / chance actions a\n",
           "num_players 1\nnode / chance actions a=nan\n",
           "num_players 1\nnode / player x actions a\n",
           "num_players 1\nnode / player 0 actions a\n",
           "num_players 1\nnode / player 1 actions a a\n",
           "num_players 1\nnode / player 1\n",
           "num_players 1\nnode / dealer actions a\n",
           "num_players 1\nnode /\n",
           "num_players 1\nnode / leaf payoffs\n",
           "num_players 1\nnode / leaf payoffs 1=0\nnum_players 2\n",
           "num_players 0\nnode / leaf payoffs\n",
           "num_players two\nnode / leaf payoffs 1=0\n",
           "num_players 1\ninfoset I\n",
       }) {
    e = parse_error(bad);
    EXPECT_EQ(e.kind(), ParseError::Kind::kSyntax) << bad;
    EXPECT_GT(e.line(), 0) << bad;
    EXPECT_EQ(std::string(e.what()).rfind("line ", 0), 0u) << e.what();
  }
}

TEST(BuildTree, FullKuhnDocument) {
  const GameTree tree = build_tree(parse_game_file(serialize_game(generate_kuhn())));
  EXPECT_EQ(tree.num_players, 2);
  EXPECT_EQ(tree.num_terminals(), 30);
  EXPECT_EQ(tree.infosets.size(), 12u);
  EXPECT_EQ(tree.infosets_of(1).size(), 6u);
  EXPECT_EQ(tree.infosets_of(2).size(), 6u);
}

TEST(BuildTree, KuhnExcerptWithPrefixedTokens) {
  const GameTree tree = build_tree(parse_game_file(std::string(kKuhnExcerpt) + R"(
node /C:JK leaf payoffs 1=0 2=0
node /C:QJ leaf payoffs 1=0 2=0
node /C:QK leaf payoffs 1=0 2=0
node /C:KJ leaf payoffs 1=0 2=0
node /C:KQ leaf payoffs 1=0 2=0
)"));
  EXPECT_TRUE(validate_game(tree).empty());
  EXPECT_EQ(tree.nodes[1].name, "/C:JQ");
  // No infoset records: every player node is a singleton.
  EXPECT_EQ(tree.infosets.size(), 4u);
}

TEST(BuildTree, Errors) {
  EXPECT_EQ(build_error("num_players 2\nnode /x player 3 actions a\nnode /x/a leaf payoffs 1=0 2=0\n")
                .kind(),
            GameError::Kind::kValidationFailed);
  EXPECT_EQ(build_error("num_players 1\nnode / player 1 actions a\nnode /q/a leaf payoffs 1=0\n")
                .kind(),
            GameError::Kind::kOrphanNode);
  EXPECT_EQ(build_error("num_players 1\nnode / player 1 actions a\nnode /b leaf payoffs 1=0\n")
                .kind(),
            GameError::Kind::kUnknownAction);
  EXPECT_EQ(build_error("num_players 2\nnode / chance actions x=0.5 y=0.5\n"
                        "node /x player 1 actions a\nnode /y player 2 actions a\n"
                        "node /x/a leaf payoffs 1=0 2=0\nnode /y/a leaf payoffs 1=0 2=0\n"
                        "infoset mixed nodes /x /y\n")
                .kind(),
            GameError::Kind::kInfosetMixedPlayers);
  // Chance sums are checked when linking, not when parsing.
  const std::string bad_sum = "num_players 1\nnode / chance actions a=0.5 b=0.6\n"
                              "node /a leaf payoffs 1=0\nnode /b leaf payoffs 1=0\n";
  EXPECT_NO_THROW(parse_game_file(bad_sum));
  const GameError e = build_error(bad_sum);
  EXPECT_EQ(e.kind(), GameError::Kind::kValidationFailed);
  EXPECT_NE(std::string(e.what()).find("chance probabilities"), std::string::npos);
  // Children must follow their parent.
  EXPECT_EQ(build_error("num_players 1\nnode /a leaf payoffs 1=0\nnode / player 1 actions a\n")
                .kind(),
            GameError::Kind::kOrphanNode);
  // A missing payoff.
  EXPECT_EQ(build_error("num_players 2\nnode / leaf payoffs 1=0\n").kind(),
            GameError::Kind::kInvalidArgument);
}

TEST(Serialize, RoundTripCatalog) {
  for (const GameTree& tree : {generate_kuhn(), generate_leduc(), generate_rock_paper_scissors()}) {
    const std::string text = serialize_game(tree);
    const GameTree again = build_tree(parse_game_file(text));
    EXPECT_TRUE(isomorphic(tree, again)) << tree.name;
    // The header comment carries the name, which is not a parameter, so
    // byte identity is checked from the first reparse on.
    const std::string once = serialize_game(again);
    EXPECT_EQ(serialize_game(build_tree(parse_game_file(once))), once) << tree.name;
    EXPECT_EQ(once.substr(once.find('\n')), text.substr(text.find('\n'))) << tree.name;
  }
}

TEST(Serialize, SingleNodeIsThreeLines) {
  GameTreeBuilder b(2, "one");
  b.add_terminal(kNone, kNone, {0.0, 0.0});
  const std::string text = serialize_game(std::move(b).build());
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 3);
  EXPECT_NE(text.find("num_players 2\n"), std::string::npos);
}

TEST(Serialize, ChanceProbabilitiesAreBitExact) {
  const std::vector<double> probs = {0.1, 0.2, 1.0 / 3.0, 1.0 - 0.1 - 0.2 - 1.0 / 3.0};
  GameTreeBuilder b(1);
  const int c = b.add_chance(kNone, kNone, {"a", "b", "c", "d"}, probs);
  for (int k = 0; k < 4; ++k) b.add_terminal(c, k, {1.0 / 7.0 * k});
  const GameTree tree = std::move(b).build();
  const GameTree again = build_tree(parse_game_file(serialize_game(tree)));
  for (int k = 0; k < 4; ++k) {
    EXPECT_EQ(again.nodes[0].chance_probs[k], probs[k]);
    EXPECT_EQ(again.nodes[k + 1].payoffs[0], tree.nodes[k + 1].payoffs[0]);
  }
}

TEST(Serialize, AwkwardLabelsSurvive) {
  GameTreeBuilder b(1, "odd");
  const int p = b.add_player(kNone, kNone, 1, {"a/b", "c=d", "e f"}, "info #1");
  for (int k = 0; k < 3; ++k) b.add_terminal(p, k, {static_cast<double>(k)});
  const GameTree tree = std::move(b).build();
  const GameTree again = build_tree(parse_game_file(serialize_game(tree)));
  EXPECT_EQ(again.nodes.size(), 4u);
  EXPECT_EQ(again.infosets.size(), 1u);
  EXPECT_EQ(again.nodes[3].payoffs[0], 2.0);
}

TEST(LoadGameFile, ReadsFromDisk) {
  const std::string path = ::testing::TempDir() + "efgraph_rps.game";
  {
    std::ofstream out(path);
    out << serialize_game(generate_rock_paper_scissors());
  }
  EXPECT_TRUE(isomorphic(load_game_file(path), generate_rock_paper_scissors()));
  EXPECT_TRUE(isomorphic(load_game("file:" + path), generate_rock_paper_scissors()));
  std::remove(path.c_str());
  EXPECT_THROW(load_game_file(path), Error);
}

TEST(Fuzz, MutatedDocumentsNeverCrash) {
  const std::string seed_docs[] = {serialize_game(generate_kuhn()),
                                   serialize_game(generate_rock_paper_scissors()),
                                   kKuhnExcerpt};
  std::mt19937_64 rng(2024);
  int parsed = 0;
  for (int k = 0; k < 1000; ++k) {
    const std::string text = fuzz::mutate(seed_docs[k % 3], rng);
    const fuzz::Outcome o = fuzz::run(text);
    EXPECT_FALSE(o.other) << o.message;
    EXPECT_TRUE(o.parsed || o.positioned);
    parsed += o.parsed;
  }
  EXPECT_GT(parsed, 0);
}

}  // namespace
}  // namespace efg
