#include "bmrf/instance_io.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace bmrf {

parse_error::parse_error(const std::string& message, std::size_t line, std::size_t column)
    : std::runtime_error("line " + std::to_string(line) + ", column " + std::to_string(column) +
                         ": " + message),
      line_(line),
      column_(column) {}

namespace {

struct token {
  std::string text;
  std::size_t line;
  std::size_t column;
};

class tokenizer {
public:
  explicit tokenizer(std::istream& in) : in_(in) {}

  // next whitespace-separated token, skipping '#' comments to end of line
  token next(const char* expected_what) {
    skip_space_and_comments();
    if (peek() == EOF)
      throw parse_error(std::string("unexpected end of input, expected ") + expected_what, line_,
                        column_);
    token t;
    t.line = line_;
    t.column = column_;
    while (peek() != EOF && !std::isspace(peek()) && peek() != '#') t.text.push_back(get());
    return t;
  }

  bool at_end() {
    skip_space_and_comments();
    return peek() == EOF;
  }

private:
  int peek() { return in_.peek(); }

  int get() {
    const int c = in_.get();
    if (c == '\n') {
      ++line_;
      column_ = 1;
    } else if (c != EOF) {
      ++column_;
    }
    return c;
  }

  void skip_space_and_comments() {
    while (true) {
      const int c = peek();
      if (c == EOF) return;
      if (c == '#') {
        while (peek() != EOF && peek() != '\n') get();
        continue;
      }
      if (std::isspace(c)) {
        get();
        continue;
      }
      return;
    }
  }

  std::istream& in_;
  std::size_t line_ = 1;
  std::size_t column_ = 1;
};

index parse_index(const token& t, const char* what) {
  if (t.text.empty() || t.text[0] == '-')
    throw parse_error(std::string(what) + " must be a non-negative integer, got '" + t.text + "'",
                      t.line, t.column);
  char* end = nullptr;
  const unsigned long long v = std::strtoull(t.text.c_str(), &end, 10);
  if (end != t.text.c_str() + t.text.size())
    throw parse_error(std::string("invalid ") + what + " '" + t.text + "'", t.line, t.column);
  return static_cast<index>(v);
}

cost parse_cost(const token& t, bool allow_inf, const char* what) {
  if (t.text == "inf") {
    if (!allow_inf)
      throw parse_error(std::string(what) + " must be finite", t.line, t.column);
    return infinity;
  }
  char* end = nullptr;
  const double v = std::strtod(t.text.c_str(), &end);
  if (end != t.text.c_str() + t.text.size() || t.text.empty())
    throw parse_error(std::string("invalid ") + what + " value '" + t.text + "'", t.line, t.column);
  if (std::isnan(v)) throw parse_error(std::string(what) + ": NaN is not allowed", t.line, t.column);
  if (v == -infinity)
    throw parse_error(std::string(what) + ": -infinity is not allowed", t.line, t.column);
  if (v == infinity && !allow_inf)
    throw parse_error(std::string(what) + " must be finite", t.line, t.column);
  return v;
}

void expect_keyword(tokenizer& tok, const char* keyword) {
  const token t = tok.next(keyword);
  if (t.text != keyword)
    throw parse_error(std::string("expected '") + keyword + "', got '" + t.text + "'", t.line,
                      t.column);
}

std::vector<std::vector<cost>> parse_block(tokenizer& tok, const std::vector<index>& sizes,
                                           bool allow_inf, const char* what) {
  std::vector<std::vector<cost>> block(sizes.size());
  for (index i = 0; i < sizes.size(); ++i) {
    block[i].reserve(sizes[i]);
    for (index k = 0; k < sizes[i]; ++k) block[i].push_back(parse_cost(tok.next(what), allow_inf, what));
  }
  return block;
}

// shortest decimal form that parses back to the same double
std::string format_cost(cost v) {
  if (v == infinity) return "inf";
  char buf[64];
  for (int precision = 1; precision <= 17; ++precision) {
    std::snprintf(buf, sizeof(buf), "%.*g", precision, v);
    if (std::strtod(buf, nullptr) == v) return buf;
  }
  return buf;
}

}  // namespace

bottleneck_instance load_instance(std::istream& in) {
  tokenizer tok(in);

  {
    const token magic = tok.next("magic 'BMRF'");
    if (magic.text != "BMRF")
      throw parse_error("not a BMRF file (magic '" + magic.text + "')", magic.line, magic.column);
    const token version = tok.next("format version");
    if (version.text != "1")
      throw parse_error("unsupported format version '" + version.text + "'", version.line,
                        version.column);
  }

  expect_keyword(tok, "nodes");
  const token node_tok = tok.next("node count");
  const index node_count = parse_index(node_tok, "node count");
  if (node_count == 0) throw parse_error("node count must be positive", node_tok.line, node_tok.column);

  std::vector<index> label_counts(node_count);
  for (index i = 0; i < node_count; ++i) {
    const token t = tok.next("label count");
    label_counts[i] = parse_index(t, "label count");
    if (label_counts[i] == 0) throw parse_error("label count must be positive", t.line, t.column);
  }

  expect_keyword(tok, "edges");
  const index edge_count = parse_index(tok.next("edge count"), "edge count");
  std::vector<edge> edges(edge_count);
  for (index e = 0; e < edge_count; ++e) {
    const token ti = tok.next("edge endpoint");
    const token tj = tok.next("edge endpoint");
    edges[e].i = parse_index(ti, "edge endpoint");
    edges[e].j = parse_index(tj, "edge endpoint");
    if (edges[e].i >= node_count || edges[e].j >= node_count)
      throw parse_error("edge endpoint out of range", ti.line, ti.column);
    if (edges[e].i == edges[e].j) throw parse_error("self-loop edge", ti.line, ti.column);
  }

  bottleneck_instance inst;
  try {
    inst.g = graph(node_count, edges);
  } catch (const std::invalid_argument& ex) {
    throw parse_error(ex.what(), node_tok.line, node_tok.column);
  }
  inst.label_counts = label_counts;

  std::vector<index> pair_sizes(edge_count);
  for (index e = 0; e < edge_count; ++e)
    pair_sizes[e] = label_counts[inst.g.edge_at(e).i] * label_counts[inst.g.edge_at(e).j];

  expect_keyword(tok, "theta_unary");
  inst.theta_unary = parse_block(tok, label_counts, true, "theta_unary");
  expect_keyword(tok, "theta_pairwise");
  inst.theta_pair = parse_block(tok, pair_sizes, true, "theta_pairwise");
  expect_keyword(tok, "phi_unary");
  inst.phi_unary = parse_block(tok, label_counts, false, "phi_unary");
  expect_keyword(tok, "phi_pairwise");
  inst.phi_pair = parse_block(tok, pair_sizes, false, "phi_pairwise");

  expect_keyword(tok, "zeta");
  const token zkind = tok.next("zeta kind");
  if (zkind.text == "zero") {
    inst.zeta = bottleneck_cost::zero();
  } else if (zkind.text == "linear") {
    const token w = tok.next("zeta weight");
    try {
      inst.zeta = bottleneck_cost::linear(parse_cost(w, false, "zeta weight"));
    } catch (const std::invalid_argument& ex) {
      throw parse_error(ex.what(), w.line, w.column);
    }
  } else if (zkind.text == "table") {
    const token kt = tok.next("zeta table size");
    const index k = parse_index(kt, "zeta table size");
    std::vector<std::pair<cost, cost>> entries(k);
    for (index r = 0; r < k; ++r) {
      entries[r].first = parse_cost(tok.next("zeta table key"), false, "zeta table key");
      entries[r].second = parse_cost(tok.next("zeta table cost"), false, "zeta table cost");
    }
    try {
      inst.zeta = bottleneck_cost::table(std::move(entries));
    } catch (const std::invalid_argument& ex) {
      throw parse_error(ex.what(), kt.line, kt.column);
    }
  } else {
    throw parse_error("unknown zeta kind '" + zkind.text + "'", zkind.line, zkind.column);
  }

  if (!tok.at_end()) {
    const token t = tok.next("end of file");
    throw parse_error("trailing content '" + t.text + "'", t.line, t.column);
  }

  inst.validate();
  return inst;
}

bottleneck_instance load_instance(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "' for reading");
  return load_instance(in);
}

void save_instance(const bottleneck_instance& inst, std::ostream& out) {
  inst.validate();
  out << "BMRF 1\n";
  out << "nodes " << inst.node_count() << "\n";
  for (index i = 0; i < inst.node_count(); ++i)
    out << inst.label_counts[i] << (i + 1 == inst.node_count() ? "\n" : " ");
  out << "edges " << inst.g.edge_count() << "\n";
  for (const auto& e : inst.g.edges()) out << e.i << " " << e.j << "\n";

  auto write_block = [&out](const char* name, const std::vector<std::vector<cost>>& block) {
    out << name << "\n";
    for (const auto& row : block) {
      for (index k = 0; k < row.size(); ++k) out << format_cost(row[k]) << (k + 1 == row.size() ? "" : " ");
      out << "\n";
    }
  };
  write_block("theta_unary", inst.theta_unary);
  write_block("theta_pairwise", inst.theta_pair);
  write_block("phi_unary", inst.phi_unary);
  write_block("phi_pairwise", inst.phi_pair);

  switch (inst.zeta.cost_kind()) {
    case bottleneck_cost::kind::zero: out << "zeta zero\n"; break;
    case bottleneck_cost::kind::linear:
      out << "zeta linear " << format_cost(inst.zeta.weight()) << "\n";
      break;
    case bottleneck_cost::kind::table:
      out << "zeta table " << inst.zeta.entries().size() << "\n";
      for (const auto& [b, c] : inst.zeta.entries())
        out << format_cost(b) << " " << format_cost(c) << "\n";
      break;
  }
}

void save_instance(const bottleneck_instance& inst, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  save_instance(inst, out);
  if (!out) throw std::runtime_error("write error on '" + path + "'");
}

}  // namespace bmrf
