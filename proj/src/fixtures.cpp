#include "linbasis/fixtures.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "linbasis/cliques.hpp"

#ifndef LINBASIS_FIXTURE_DIR
#define LINBASIS_FIXTURE_DIR "fixtures"
#endif

namespace linbasis {

std::string fixture_dir() {
  if (const char* env = std::getenv("LINBASIS_FIXTURE_DIR"); env != nullptr && *env != '\0') return env;
  return LINBASIS_FIXTURE_DIR;
}

std::string fixture_path(std::string_view file) {
  return (std::filesystem::path(fixture_dir()) / std::string(file)).string();
}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    auto pos = s.find(sep, start);
    out.push_back(trim(s.substr(start, pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

std::vector<std::string> words(std::string_view s) {
  std::vector<std::string> out;
  std::istringstream in{std::string(s)};
  for (std::string w; in >> w;) out.push_back(w);
  return out;
}

// Non-comment, non-blank lines of a fixture file.
std::vector<std::string> data_lines(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open fixture file '" + path + "'");
  std::vector<std::string> out;
  for (std::string line; std::getline(in, line);) {
    auto t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    out.emplace_back(t);
  }
  return out;
}

std::pair<std::string, std::string> name_and_body(const std::string& line) {
  auto colon = line.find(':');
  if (colon == std::string::npos) throw FormatError("fixture line lacks 'name:': " + line);
  return {std::string(trim(std::string_view(line).substr(0, colon))),
          std::string(trim(std::string_view(line).substr(colon + 1)))};
}

Assignment assignment_of(const std::vector<std::string>& names) {
  Assignment a;
  for (const auto& n : names) a.true_vars.insert(n);
  return a;
}

// Numeric suffix ordering so g5_10 follows g5_9.
bool name_less(const std::string& a, const std::string& b) {
  auto split_num = [](const std::string& s) {
    std::size_t i = s.size();
    while (i > 0 && std::isdigit(static_cast<unsigned char>(s[i - 1]))) --i;
    long v = i < s.size() ? std::stol(s.substr(i)) : -1;
    return std::pair<std::string, long>{s.substr(0, i), v};
  };
  return split_num(a) < split_num(b);
}

}  // namespace

FormulaInference supermix(int k) {
  if (k < 1) throw RangeError("supermix needs at least one b variable");
  std::string lhs = "a & (", rhs = "a | (";
  for (int i = 0; i < k; ++i) {
    lhs += (i ? " | b" : "b") + std::to_string(i);
    rhs += (i ? " & b" : "b") + std::to_string(i);
  }
  return parse_inference(lhs + ") -> " + rhs + ")");
}

Web web_from_edge_string(int n, std::string_view colours) {
  if (colours.size() != static_cast<std::size_t>(edge_count(n))) {
    throw FormatError("edge string '" + std::string(colours) + "' has the wrong length for n=" + std::to_string(n));
  }
  Web g(n);
  std::size_t i = 0;
  for (int x = 0; x < n; ++x) {
    for (int y = x + 1; y < n; ++y, ++i) {
      if (colours[i] != 'g' && colours[i] != 'r') throw FormatError("edge strings use only 'g' and 'r'");
      if (colours[i] == 'r') g.set_edge(x, y);
    }
  }
  return g;
}

std::string edge_string(const Web& g) {
  std::string out;
  for (int x = 0; x < g.n(); ++x) {
    for (int y = x + 1; y < g.n(); ++y) out += g.edge(x, y) ? 'r' : 'g';
  }
  return out;
}

const FormulaInference& Catalogue::formula(const std::string& name) const {
  auto it = formulas.find(name);
  if (it == formulas.end()) throw Error("no fixture named '" + name + "'");
  return it->second;
}

GraphInference Catalogue::web(const std::string& name) const {
  return to_graph_inference(formula(name)).inference;
}

const GraphInference& Catalogue::graph_inference(const std::string& name) const {
  auto it = graph_inferences.find(name);
  if (it == graph_inferences.end()) throw Error("no graph fixture named '" + name + "'");
  return it->second;
}

std::vector<GraphInference> Catalogue::graph_family(const std::string& prefix) const {
  std::vector<std::string> names;
  for (const auto& [name, inf] : graph_inferences) {
    if (name.starts_with(prefix)) names.push_back(name);
  }
  std::sort(names.begin(), names.end(), name_less);
  std::vector<GraphInference> out;
  for (const auto& n : names) out.push_back(graph_inferences.at(n));
  return out;
}

Catalogue load_catalogue(const std::string& dir) {
  namespace fs = std::filesystem;
  auto path = [&](const char* f) { return (fs::path(dir) / f).string(); };
  Catalogue c;

  for (const auto& line : data_lines(path("inferences.txt"))) {
    auto [name, body] = name_and_body(line);
    c.formulas.emplace(name, parse_inference(body));
  }
  c.formulas.emplace("dual_eq3", dual_inference(c.formula("eq3")));
  for (int k = 1; k <= 5; ++k) {
    std::string name = "nine_" + std::to_string(k);
    c.formulas.emplace(name + "_dual", dual_inference(c.formula(name)));
  }
  for (int k = 1; k <= 4; ++k) c.formulas.emplace("supermix_" + std::to_string(k), supermix(k));

  for (const auto& line : data_lines(path("graphs.txt"))) {
    auto [name, body] = name_and_body(line);
    auto parts = split(body, ';');
    if (parts.size() != 2) throw FormatError("graph fixture needs 'nodes ; edges': " + line);
    NamedGraph g{Web(static_cast<int>(words(parts[0]).size())), words(parts[0])};
    for (const auto& e : words(parts[1])) {
      auto dash = e.find('-');
      auto a = std::find(g.names.begin(), g.names.end(), e.substr(0, dash));
      auto b = std::find(g.names.begin(), g.names.end(), e.substr(dash + 1));
      if (dash == std::string::npos || a == g.names.end() || b == g.names.end()) {
        throw FormatError("bad edge '" + e + "' in graph fixture " + name);
      }
      g.web.set_edge(static_cast<int>(a - g.names.begin()), static_cast<int>(b - g.names.begin()));
    }
    c.graphs.emplace(name, g);
  }

  for (const auto& line : data_lines(path("graph_inferences.txt"))) {
    auto [name, body] = name_and_body(line);
    auto w = words(body);
    if (w.size() != 4 || w[2] != "->") throw FormatError("bad graph inference fixture: " + line);
    int n = std::stoi(w[0]);
    c.graph_inferences.emplace(name, GraphInference{web_from_edge_string(n, w[1]), web_from_edge_string(n, w[3])});
  }

  for (const auto& line : data_lines(path("countermodels.txt"))) {
    auto f = split(line, ';');
    if (f.size() != 5 || (f[1] != "lhs" && f[1] != "rhs")) throw FormatError("bad countermodel fixture: " + line);
    c.countermodels.push_back({std::string(f[0]), f[1] == "lhs", parse_formula(f[2]), std::string(f[3]),
                               assignment_of(words(f[4]))});
  }

  for (const auto& line : data_lines(path("web_strings.txt"))) {
    auto [head, body] = name_and_body(line);
    auto hw = words(head);
    auto parts = split(body, ';');
    if (hw.size() != 2 || parts.size() != 2 || (hw[1] != "lhs" && hw[1] != "rhs")) {
      throw FormatError("bad web string fixture: " + line);
    }
    auto order = words(parts[0]);
    c.web_strings.push_back({hw[0], hw[1] == "lhs", order,
                             web_from_edge_string(static_cast<int>(order.size()), std::string(parts[1]))});
  }

  // Every fixture inference must be valid.
  for (const auto& [name, inf] : c.formulas) {
    if (!is_valid(inf)) throw Error("fixture '" + name + "' is not valid");
  }
  for (const auto& [name, inf] : c.graph_inferences) {
    if (!implies_cliquewise(inf.lhs, inf.rhs)) throw Error("graph fixture '" + name + "' is not valid");
  }
  return c;
}

const Catalogue& catalogue() {
  static const Catalogue c = load_catalogue(fixture_dir());
  return c;
}

}  // namespace linbasis
