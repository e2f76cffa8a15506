#include "logdoc/grammar.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <sstream>

#include "logdoc/text.hpp"

namespace logdoc {

Grammar Grammar::parse(std::string_view text, const std::string& origin) {
  Grammar g;
  std::istringstream in{std::string(text)};
  std::string raw;
  std::size_t lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    std::string line = trim(strip_comment(raw));
    if (line.empty()) continue;
    auto where = origin + ":" + std::to_string(lineno) + ": ";
    auto arrow = line.find("->");
    auto at = line.find('@');
    if (arrow == std::string::npos) throw SyntaxError(where + "expected '->'", line, 0);
    if (at == std::string::npos || at < arrow) throw SyntaxError(where + "expected '@builder'", line, 0);
    GrammarRule rule;
    rule.lhs = trim(line.substr(0, arrow));
    std::istringstream rhs(line.substr(arrow + 2, at - arrow - 2));
    for (std::string cat; rhs >> cat;) rule.rhs.push_back(cat);
    rule.builder = trim(line.substr(at + 1));
    if (rule.lhs.empty()) throw SyntaxError(where + "empty left-hand side", line, 0);
    if (rule.rhs.empty()) throw SyntaxError(where + "empty right-hand side", line, arrow + 2);
    if (rule.builder.empty()) throw SyntaxError(where + "empty builder id", line, at + 1);
    g.add(std::move(rule));
  }
  return g;
}

Grammar Grammar::load(const std::string& path) { return parse(read_file(path), path); }

void Grammar::add(GrammarRule rule) {
  if (rule.rhs.empty()) throw Error("grammar rule " + rule.lhs + " has an empty right-hand side");
  rules_.push_back(std::move(rule));
}

bool Grammar::hosts(const std::string& category, const std::string& adjunct) const {
  for (const auto& r : rules_) {
    if (r.lhs != category) continue;
    for (std::size_t i = 1; i < r.rhs.size(); ++i)
      if (r.rhs[i] == adjunct) return true;
  }
  return false;
}

bool Grammar::hosts_flat(const std::string& category, const std::string& adjunct) const {
  for (const auto& r : rules_) {
    if (r.lhs != category) continue;
    if (std::find(r.rhs.begin(), r.rhs.end(), r.lhs) != r.rhs.end()) continue;
    for (std::size_t i = 1; i < r.rhs.size(); ++i)
      if (r.rhs[i] == adjunct) return true;
  }
  return false;
}

std::vector<std::uint32_t> Chart::spanning(const std::string& category) const {
  std::vector<std::uint32_t> out;
  for (const auto& e : edges_)
    if (e.start == 0 && e.end == tokens_.size() && e.category == category) out.push_back(e.ordinal);
  return out;
}

std::vector<std::uint32_t> Chart::roots() const {
  auto s = spanning("S");
  return s.empty() ? spanning("NP") : s;
}

std::vector<std::string> Chart::yield(std::uint32_t id) const {
  const auto& e = edge(id);
  if (e.lexical())
    return {tokens_.begin() + e.start, tokens_.begin() + e.end};
  std::vector<std::string> out;
  for (auto c : e.children) {
    auto part = yield(c);
    out.insert(out.end(), part.begin(), part.end());
  }
  return out;
}

bool Chart::add(ChartEdge e) {
  std::string sig;
  if (e.lexical()) {
    sig = "L" + std::to_string(e.start) + ":" + std::to_string(reinterpret_cast<std::uintptr_t>(e.entry));
  } else {
    sig = "R" + std::to_string(e.rule);
    for (auto c : e.children) sig += ":" + std::to_string(c);
  }
  if (signatures_.count(sig)) return false;
  if (edges_.size() >= max_edges_) {
    truncated_ = true;
    return false;
  }
  signatures_.insert(std::move(sig));
  e.ordinal = static_cast<std::uint32_t>(edges_.size());
  if (by_start_.size() < tokens_.size()) by_start_.resize(tokens_.size());
  by_start_[e.start].push_back(e.ordinal);
  edges_.push_back(std::move(e));
  return true;
}

namespace {

std::size_t extend(Chart& chart, const Grammar& grammar, const Lexicon& lexicon,
                   std::vector<std::vector<std::uint32_t>>& by_start,
                   const std::function<bool(ChartEdge)>& add) {
  const auto& tokens = chart.tokens();
  const auto n = static_cast<std::uint32_t>(tokens.size());
  const auto& rules = grammar.rules();
  std::size_t added = 0;
  by_start.resize(n);

  for (std::uint32_t len = 1; len <= n; ++len) {
    for (std::uint32_t i = 0; i + len <= n; ++i) {
      const std::uint32_t j = i + len;
      std::size_t span_begin = chart.edges().size();

      auto [match_len, entries] = lexicon.match(tokens, i);
      if (match_len == len) {
        for (const auto* entry : entries) {
          ChartEdge e;
          e.start = i;
          e.end = j;
          e.category = std::string(to_string(entry->category));
          e.entry = entry;
          if (add(std::move(e))) ++added;
        }
      }

      // n-ary rules: every daughter is strictly shorter than the span.
      for (std::size_t r = 0; r < rules.size(); ++r) {
        const auto& rhs = rules[r].rhs;
        if (rhs.size() < 2 || rhs.size() > len) continue;
        std::vector<std::uint32_t> kids;
        std::function<void(std::uint32_t, std::size_t)> dfs = [&](std::uint32_t pos, std::size_t k) {
          const bool last = k + 1 == rhs.size();
          // Snapshot: edges added during this span never start daughters here.
          const auto candidates = by_start[pos];
          for (auto id : candidates) {
            const auto& e = chart.edge(id);
            if (e.category != rhs[k]) continue;
            if (last ? e.end != j : e.end + (rhs.size() - k - 1) > j) continue;
            if (e.length() >= len) continue;
            kids.push_back(id);
            if (last) {
              ChartEdge parent;
              parent.start = i;
              parent.end = j;
              parent.category = rules[r].lhs;
              parent.children = kids;
              parent.rule = static_cast<int>(r);
              if (add(std::move(parent))) ++added;
            } else {
              dfs(e.end, k + 1);
            }
            kids.pop_back();
          }
        };
        dfs(i, 0);
      }

      // Unary rules over this span until nothing new appears.
      std::vector<std::uint32_t> here;
      for (auto id : by_start[i])
        if (chart.edge(id).end == j) here.push_back(id);
      (void)span_begin;
      for (std::size_t p = 0; p < here.size(); ++p) {
        const std::uint32_t child = here[p];
        for (std::size_t r = 0; r < rules.size(); ++r) {
          if (rules[r].rhs.size() != 1 || rules[r].rhs[0] != chart.edge(child).category) continue;
          // Reject unary cycles over the same span.
          bool cycle = false;
          for (std::uint32_t cur = child;;) {
            const auto& ce = chart.edge(cur);
            if (ce.category == rules[r].lhs) {
              cycle = true;
              break;
            }
            if (ce.lexical() || ce.children.size() != 1) break;
            cur = ce.children[0];
          }
          if (cycle) continue;
          ChartEdge parent;
          parent.start = i;
          parent.end = j;
          parent.category = rules[r].lhs;
          parent.children = {child};
          parent.rule = static_cast<int>(r);
          if (add(std::move(parent))) {
            ++added;
            here.push_back(chart.edges().back().ordinal);
          }
        }
      }
    }
  }
  return added;
}

}  // namespace

Chart chart_parse(const std::vector<std::string>& tokens, const Grammar& grammar,
                  const Lexicon& lexicon, std::size_t max_edges) {
  Chart chart(tokens);
  chart.max_edges_ = max_edges;
  close_chart(chart, grammar, lexicon);
  return chart;
}

std::size_t close_chart(Chart& chart, const Grammar& grammar, const Lexicon& lexicon) {
  return extend(chart, grammar, lexicon, chart.by_start_,
                [&chart](ChartEdge e) { return chart.add(std::move(e)); });
}

namespace {

// Lexical head of a constituent.
std::uint32_t head_leaf(const Chart& chart, std::uint32_t id) {
  for (;;) {
    const auto& e = chart.edge(id);
    if (e.lexical()) return id;
    std::uint32_t next = e.children.back();
    if (e.category == "NP") {
      for (auto c : e.children) {
        const auto& cat = chart.edge(c).category;
        if (cat == "Nom" || cat == "PName" || cat == "NP") {
          next = c;
          break;
        }
      }
    } else if (e.category == "VP" || e.category == "PP") {
      next = e.children.front();
    }
    id = next;
  }
}

}  // namespace

Reading score_reading(const Chart& chart, std::uint32_t root, const Grammar& grammar,
                      const PreferenceWeights& weights) {
  struct Up {
    std::uint32_t parent;
    std::size_t index;
  };
  std::map<std::uint32_t, Up> parent;
  std::vector<std::uint32_t> nodes;
  std::function<void(std::uint32_t)> walk = [&](std::uint32_t id) {
    nodes.push_back(id);
    const auto& e = chart.edge(id);
    for (std::size_t k = 0; k < e.children.size(); ++k) {
      parent[e.children[k]] = {id, k};
      walk(e.children[k]);
    }
  };
  walk(root);

  // NPs inside the argument PP of a relational noun are closed to adjuncts.
  std::set<std::uint32_t> closed;
  for (auto id : nodes) {
    const auto& pp = chart.edge(id);
    if (pp.category != "PP" || pp.lexical() || !parent.count(id)) continue;
    const auto& prep = chart.edge(pp.children.front());
    if (!prep.lexical() || !prep.entry->relational_argument) continue;
    const auto host = parent[id].parent;
    const auto& head = chart.edge(head_leaf(chart, host));
    if (head.entry->category != Category::RelN) continue;
    std::function<void(std::uint32_t)> mark = [&](std::uint32_t n) {
      const auto& e = chart.edge(n);
      if (e.category == "NP") closed.insert(n);
      for (auto c : e.children) mark(c);
    };
    for (std::size_t k = 1; k < pp.children.size(); ++k) mark(pp.children[k]);
  }

  Reading reading;
  reading.root = root;
  for (auto host_id : nodes) {
    const auto& host = chart.edge(host_id);
    if (host.lexical()) continue;
    const auto& rule = grammar.rules().at(static_cast<std::size_t>(host.rule));
    const bool adjunction = std::find(rule.rhs.begin(), rule.rhs.end(), rule.lhs) != rule.rhs.end();
    for (std::size_t k = 1; k < host.children.size(); ++k) {
      const auto& adj = chart.edge(host.children[k]);
      if (adj.category != "PP" && adj.category != "Adv") continue;
      const auto prev = host.children[k - 1];
      const std::uint32_t chosen =
          adjunction && chart.edge(prev).category == host.category ? prev : host_id;

      std::vector<std::uint32_t> lower, sites{chosen};
      for (std::uint32_t cur = prev;;) {
        const auto& e = chart.edge(cur);
        if (cur != chosen && grammar.hosts(e.category, adj.category)) {
          lower.push_back(cur);
          sites.push_back(cur);
        }
        if (e.lexical()) break;
        cur = e.children.back();
      }
      for (std::uint32_t cur = host_id; parent.count(cur);) {
        const auto up = parent[cur];
        const auto& p = chart.edge(up.parent);
        if (up.index + 1 != p.children.size()) break;
        if (up.parent != chosen && grammar.hosts(p.category, adj.category)) sites.push_back(up.parent);
        cur = up.parent;
      }
      if (sites.size() < 2) continue;

      auto available = [&](std::uint32_t id) { return !closed.count(id); };
      auto cost = [&](std::uint32_t id) {
        return grammar.hosts_flat(chart.edge(id).category, adj.category) ? 0 : 1;
      };
      AttachmentDecision d;
      d.adjunct = host.children[k];
      d.site = chosen;
      d.alternatives = sites.size();
      if (available(chosen)) {
        d.lowest = std::none_of(lower.begin(), lower.end(), available);
        int best = cost(chosen);
        for (auto s : sites)
          if (available(s)) best = std::min(best, cost(s));
        d.minimal = cost(chosen) <= best;
        d.lexical = chart.edge(head_leaf(chart, chosen)).entry->weight;
      }
      reading.score += (d.lowest ? weights.right_association : 0.0) +
                       (d.minimal ? weights.minimal_attachment : 0.0) + d.lexical;
      reading.trace.push_back(d);
    }
  }
  return reading;
}

std::vector<Reading> prune_by_proportional_distance(std::vector<Reading> readings, double theta) {
  if (!(theta > 0.0 && theta <= 1.0)) throw Error("pruning threshold must lie in (0, 1]");
  if (readings.empty()) return readings;
  double best = readings.front().score;
  for (const auto& r : readings) best = std::max(best, r.score);
  if (best <= 0.0) return readings;
  std::vector<Reading> kept;
  for (auto& r : readings)
    if (r.score >= theta * best - 1e-12) kept.push_back(std::move(r));
  return kept;
}

std::vector<ChartPiece> cover_span(const Chart& chart, std::uint32_t start, std::uint32_t end,
                                   std::uint32_t max_length) {
  static const std::map<std::string, int> priority = {{"S", 0}, {"VP", 1}, {"NP", 2}, {"PP", 3}};
  std::vector<ChartPiece> out;
  std::uint32_t pos = start;
  while (pos < end) {
    const ChartEdge* best = nullptr;
    for (const auto& e : chart.edges()) {
      if (e.start != pos || e.end > end || e.length() > max_length) continue;
      auto p = priority.find(e.category);
      if (p == priority.end()) continue;
      if (!best || e.length() > best->length() ||
          (e.length() == best->length() && p->second < priority.at(best->category)))
        best = &e;
    }
    if (best) {
      out.push_back({best->start, best->end, false, best->ordinal});
      pos = best->end;
    } else {
      out.push_back({pos, pos + 1, true, 0});
      ++pos;
    }
  }
  return out;
}

std::vector<ChartPiece> maximal_fragments(const Chart& chart) {
  if (!chart.roots().empty())
    throw Error("maximal_fragments: chart already has a spanning parse");
  const auto n = static_cast<std::uint32_t>(chart.tokens().size());
  return cover_span(chart, 0, n, n);
}

}  // namespace logdoc
