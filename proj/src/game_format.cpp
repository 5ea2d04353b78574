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

#include "efgraph/game_format.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <unordered_map>

#include <fmt/format.h>

#include "efgraph/error.hpp"

namespace efg {

namespace {

using NodeRecord = GameFileDocument::NodeRecord;

std::vector<std::string_view> tokenize(std::string_view line) {
  std::vector<std::string_view> tokens;
  std::size_t i = 0;
  auto is_space = [](char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\v' || c == '\f'; };
  while (i < line.size()) {
    while (i < line.size() && is_space(line[i])) ++i;
    const std::size_t start = i;
    while (i < line.size() && !is_space(line[i])) ++i;
    if (i > start) tokens.push_back(line.substr(start, i - start));
  }
  return tokens;
}

[[noreturn]] void syntax(int line, const std::string& msg) {
  throw ParseError(ParseError::Kind::kSyntax, line, msg);
}

double parse_real(std::string_view token, int line) {
  double value = 0.0;
  const char* first = token.data();
  const char* last = first + token.size();
  if (!token.empty() && *first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last || first == last || !std::isfinite(value)) {
    syntax(line, fmt::format("'{}' is not a finite decimal number", token));
  }
  return value;
}

int parse_int(std::string_view token, int line) {
  int value = 0;
  const char* first = token.data();
  const char* last = first + token.size();
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last || first == last) {
    syntax(line, fmt::format("'{}' is not an integer", token));
  }
  return value;
}

// Splits `name=value` at the last '='.
std::pair<std::string_view, std::string_view> split_assignment(std::string_view token,
                                                               int line) {
  const auto eq = token.rfind('=');
  if (eq == std::string_view::npos || eq == 0 || eq + 1 == token.size()) {
    syntax(line, fmt::format("expected name=value, got '{}'", token));
  }
  return {token.substr(0, eq), token.substr(eq + 1)};
}

NodeRecord parse_node(const std::vector<std::string_view>& tok, int line) {
  if (tok.size() < 3) syntax(line, "node record needs a name and a kind");
  NodeRecord rec;
  rec.name = std::string(tok[1]);
  rec.line = line;
  const std::string_view kind = tok[2];
  std::size_t pos = 3;
  auto expect_keyword = [&](std::string_view keyword) {
    if (pos >= tok.size() || tok[pos] != keyword) {
      syntax(line, fmt::format("expected '{}' after '{}'", keyword, tok[pos - 1]));
    }
    ++pos;
    if (pos >= tok.size()) syntax(line, fmt::format("'{}' needs at least one entry", keyword));
  };

  if (kind == "chance") {
    rec.kind = NodeRecord::Kind::kChance;
    expect_keyword("actions");
    std::set<std::string_view> seen;
    for (; pos < tok.size(); ++pos) {
      const auto [event, prob] = split_assignment(tok[pos], line);
      if (!seen.insert(event).second) syntax(line, fmt::format("duplicate event '{}'", event));
      rec.actions.emplace_back(event);
      rec.probs.push_back(parse_real(prob, line));
    }
  } else if (kind == "player") {
    rec.kind = NodeRecord::Kind::kPlayer;
    if (pos >= tok.size()) syntax(line, "player index missing");
    rec.player = parse_int(tok[pos++], line);
    if (rec.player < 1) syntax(line, fmt::format("player index {} must be >= 1", rec.player));
    expect_keyword("actions");
    std::set<std::string_view> seen;
    for (; pos < tok.size(); ++pos) {
      if (!seen.insert(tok[pos]).second) syntax(line, fmt::format("duplicate action '{}'", tok[pos]));
      rec.actions.emplace_back(tok[pos]);
    }
  } else if (kind == "leaf") {
    rec.kind = NodeRecord::Kind::kLeaf;
    expect_keyword("payoffs");
    for (; pos < tok.size(); ++pos) {
      const auto [player, value] = split_assignment(tok[pos], line);
      rec.payoffs.emplace_back(parse_int(player, line), parse_real(value, line));
    }
  } else {
    syntax(line, fmt::format("unknown node kind '{}'", kind));
  }
  return rec;
}

// Action labels additionally may not contain the path separator or '='.
std::string sanitize(std::string_view token, bool label = false) {
  std::string out(token);
  for (char& c : out) {
    const bool reserved = label && (c == '/' || c == '=');
    if (reserved || c == '#' || std::isspace(static_cast<unsigned char>(c))) c = '_';
  }
  if (out.empty()) out = "_";
  return out;
}

std::string path_child(const std::string& parent, const std::string& token) {
  if (!parent.empty() && parent.back() == '/') return parent + token;
  return parent + "/" + token;
}

}  // namespace

int GameFileDocument::num_players() const {
  const std::string value = parameter("num_players");
  if (value.empty()) {
    throw ParseError(ParseError::Kind::kMissingParameter, 0, "num_players is required");
  }
  return parse_int(value, 0);
}

std::string GameFileDocument::parameter(std::string_view key) const {
  for (const auto& [k, v] : parameters) {
    if (k == key) return v;
  }
  return {};
}

GameFileDocument parse_game_file(std::string_view text) {
  GameFileDocument doc;
  std::set<std::string, std::less<>> node_names;
  std::set<std::string, std::less<>> infoset_names;
  int line_no = 0;
  int num_players_line = 0;
  int first_record_line = 0;
  bool seen_records = false;

  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    start = end + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    const auto tok = tokenize(line);
    if (tok.empty()) {
      if (end == text.size()) break;
      continue;
    }

    if (!seen_records && (tok[0] == "node" || tok[0] == "infoset")) first_record_line = line_no;
    if (tok[0] == "node") {
      seen_records = true;
      NodeRecord rec = parse_node(tok, line_no);
      if (!node_names.insert(rec.name).second) {
        throw ParseError(ParseError::Kind::kDuplicateName, line_no,
                         fmt::format("duplicate node name '{}'", rec.name));
      }
      doc.nodes.push_back(std::move(rec));
    } else if (tok[0] == "infoset") {
      seen_records = true;
      if (tok.size() < 4 || tok[2] != "nodes") {
        syntax(line_no, "expected 'infoset <name> nodes <node>...'");
      }
      GameFileDocument::InfosetRecord rec;
      rec.name = std::string(tok[1]);
      rec.line = line_no;
      for (std::size_t i = 3; i < tok.size(); ++i) {
        if (!node_names.contains(tok[i])) {
          throw ParseError(ParseError::Kind::kUnknownNode, line_no,
                           fmt::format("infoset '{}' references unknown node '{}'", rec.name,
                                       tok[i]));
        }
        rec.nodes.emplace_back(tok[i]);
      }
      if (!infoset_names.insert(rec.name).second) {
        throw ParseError(ParseError::Kind::kDuplicateName, line_no,
                         fmt::format("duplicate infoset name '{}'", rec.name));
      }
      doc.infosets.push_back(std::move(rec));
    } else if (seen_records) {
      syntax(line_no, fmt::format("unexpected '{}' after node records", tok[0]));
    } else if (tok.size() >= 2) {
      std::string value(tok[1]);
      for (std::size_t i = 2; i < tok.size(); ++i) value += " " + std::string(tok[i]);
      if (tok[0] == "num_players") num_players_line = line_no;
      doc.parameters.emplace_back(std::string(tok[0]), std::move(value));
    }
    // A lone token before the records is a section header; ignored.
    if (end == text.size()) break;
  }

  if (num_players_line == 0) {
    // Positioned where the parameter was due: the first record, or the end.
    throw ParseError(ParseError::Kind::kMissingParameter,
                     first_record_line > 0 ? first_record_line : std::max(line_no, 1),
                     "num_players is required before the node records");
  }
  const std::string n = doc.parameter("num_players");
  if (parse_int(n, num_players_line) < 1) {
    syntax(num_players_line, "num_players must be >= 1");
  }
  return doc;
}

GameTree build_tree(const GameFileDocument& doc) {
  const int n_players = doc.num_players();
  std::string name = doc.parameter("name");
  GameTreeBuilder builder(n_players, name.empty() ? "game" : name);

  std::unordered_map<std::string, std::string> infoset_of;
  for (const auto& rec : doc.infosets) {
    for (const std::string& member : rec.nodes) {
      if (!infoset_of.emplace(member, rec.name).second) {
        throw GameError(GameError::Kind::kInvalidArgument,
                        fmt::format("line {}: node '{}' listed in two infosets", rec.line, member));
      }
    }
  }

  std::unordered_map<std::string, int> ids;
  for (const NodeRecord& rec : doc.nodes) {
    int parent = kNone;
    int action = kNone;
    if (!ids.empty()) {
      const auto slash = rec.name.rfind('/');
      if (slash == std::string::npos) {
        throw GameError(GameError::Kind::kOrphanNode,
                        fmt::format("line {}: node '{}' has no parent path", rec.line, rec.name));
      }
      std::string parent_name = rec.name.substr(0, slash);
      if (parent_name.empty()) parent_name = "/";
      const auto it = ids.find(parent_name);
      if (it == ids.end() || parent_name == rec.name) {
        throw GameError(GameError::Kind::kOrphanNode,
                        fmt::format("line {}: parent '{}' of node '{}' is not declared earlier",
                                    rec.line, parent_name, rec.name));
      }
      parent = it->second;
      const std::string token = rec.name.substr(slash + 1);
      const auto& parent_rec = doc.nodes[parent];
      auto find_action = [&](std::string_view label) {
        for (std::size_t a = 0; a < parent_rec.actions.size(); ++a) {
          if (parent_rec.actions[a] == label) return static_cast<int>(a);
        }
        return kNone;
      };
      action = find_action(token);
      if (action == kNone) {
        if (const auto colon = token.find(':'); colon != std::string::npos) {
          action = find_action(std::string_view(token).substr(colon + 1));
        }
      }
      if (action == kNone) {
        throw GameError(GameError::Kind::kUnknownAction,
                        fmt::format("line {}: '{}' is not an action of '{}'", rec.line, token,
                                    parent_rec.name));
      }
    }

    int id = kNone;
    switch (rec.kind) {
      case NodeRecord::Kind::kChance:
        id = builder.add_chance(parent, action, rec.actions, rec.probs);
        break;
      case NodeRecord::Kind::kPlayer: {
        auto it = infoset_of.find(rec.name);
        id = builder.add_player(parent, action, rec.player, rec.actions,
                                it == infoset_of.end() ? std::string() : it->second);
        break;
      }
      case NodeRecord::Kind::kLeaf: {
        std::vector<double> payoffs(n_players, 0.0);
        std::vector<bool> seen(n_players, false);
        for (const auto& [player, value] : rec.payoffs) {
          if (player < 1 || player > n_players || seen[player - 1]) {
            throw GameError(GameError::Kind::kInvalidArgument,
                            fmt::format("line {}: bad or repeated payoff index {}", rec.line,
                                        player));
          }
          seen[player - 1] = true;
          payoffs[player - 1] = value;
        }
        for (int i = 0; i < n_players; ++i) {
          if (!seen[i]) {
            throw GameError(GameError::Kind::kInvalidArgument,
                            fmt::format("line {}: missing payoff for player {}", rec.line, i + 1));
          }
        }
        id = builder.add_terminal(parent, action, std::move(payoffs));
        break;
      }
    }
    builder.set_node_name(id, rec.name);
    ids.emplace(rec.name, id);
  }
  if (ids.empty()) {
    throw GameError(GameError::Kind::kInvalidArgument, "document has no node records");
  }
  for (const auto& rec : doc.infosets) {
    for (const std::string& member : rec.nodes) {
      if (doc.nodes[ids.at(member)].kind != NodeRecord::Kind::kPlayer) {
        throw GameError(GameError::Kind::kInvalidArgument,
                        fmt::format("line {}: infoset '{}' contains non-player node '{}'",
                                    rec.line, rec.name, member));
      }
    }
  }
  return std::move(builder).build();
}

std::string serialize_game(const GameTree& tree) {
  std::vector<std::string> names(tree.nodes.size());
  std::vector<std::vector<std::string>> labels(tree.nodes.size());
  for (const GameNode& h : tree.nodes) {
    for (const auto& a : h.actions) labels[h.id].push_back(sanitize(a, true));
    names[h.id] = h.parent == kNone
                      ? "/"
                      : path_child(names[h.parent], labels[h.parent][h.parent_action]);
  }

  std::string out = fmt::format("# game {}\nnum_players {}\n", sanitize(tree.name),
                                tree.num_players);
  for (const GameNode& h : tree.nodes) {
    out += "node " + names[h.id];
    switch (h.kind) {
      case NodeKind::kChance:
        out += " chance actions";
        for (std::size_t a = 0; a < h.actions.size(); ++a) {
          out += fmt::format(" {}={:.17g}", labels[h.id][a], h.chance_probs[a]);
        }
        break;
      case NodeKind::kPlayer:
        out += fmt::format(" player {} actions", h.player);
        for (const auto& a : labels[h.id]) out += " " + a;
        break;
      case NodeKind::kTerminal:
        out += " leaf payoffs";
        for (std::size_t i = 0; i < h.payoffs.size(); ++i) {
          out += fmt::format(" {}={:.17g}", i + 1, h.payoffs[i]);
        }
        break;
    }
    out += '\n';
  }
  std::set<std::string> used;
  for (const Infoset& s : tree.infosets) {
    std::string name = sanitize(s.name);
    if (!used.insert(name).second) {
      name += fmt::format("~{}", s.id);
      used.insert(name);
    }
    out += "infoset " + name + " nodes";
    for (int m : s.members) out += " " + names[m];
    out += '\n';
  }
  return out;
}

GameTree load_game_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(fmt::format("cannot open game file '{}'", path));
  std::stringstream buffer;
  buffer << in.rdbuf();
  return build_tree(parse_game_file(buffer.str()));
}

}  // namespace efg
