#include "catbranch/io.hpp"

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <vector>

namespace catbranch {

std::string format_double(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double parse_double(const std::string& s) {
  if (s.empty()) throw InputError("expected a number, got an empty field");
  errno = 0;
  char* end = nullptr;
  double v = std::strtod(s.c_str(), &end);
  if (end != s.c_str() + s.size() || errno == ERANGE || std::isnan(v))
    throw InputError("malformed number '" + s + "'");
  return v;
}

namespace {

long parse_long(const std::string& s) {
  char* end = nullptr;
  long v = std::strtol(s.c_str(), &end, 10);
  if (s.empty() || end != s.c_str() + s.size()) throw InputError("malformed integer '" + s + "'");
  return v;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) out.push_back(cur);
  return out;
}

std::string trim_ws(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

// Parses `key=value` tokens from a header line (optionally prefixed by '#').
std::map<std::string, std::string> header_fields(std::string line) {
  if (!line.empty() && line[0] == '#') line.erase(0, 1);
  std::map<std::string, std::string> kv;
  std::istringstream in(line);
  std::string tok;
  while (in >> tok) {
    auto eq = tok.find('=');
    if (eq == std::string::npos) throw InputError("malformed header token '" + tok + "'");
    kv[tok.substr(0, eq)] = tok.substr(eq + 1);
  }
  return kv;
}

const std::string& need(const std::map<std::string, std::string>& kv, const std::string& k) {
  auto it = kv.find(k);
  if (it == kv.end()) throw InputError("missing header field '" + k + "'");
  return it->second;
}

bool next_data_line(std::istream& is, std::string& line) {
  while (std::getline(is, line)) {
    line = trim_ws(line);
    if (!line.empty()) return true;
  }
  return false;
}

}  // namespace

void write_forest(std::ostream& os, const FamilyForest& f) {
  // renumber in depth-first order so equal forests serialize identically
  auto order = preorder(f);
  std::vector<int> id(f.nodes.size(), -1);
  for (std::size_t i = 0; i < order.size(); ++i) id[order[i]] = static_cast<int>(i);
  os << "roots=";
  for (std::size_t i = 0; i < f.roots.size(); ++i) os << (i ? "," : "") << id[f.roots[i]];
  os << " height_cap=" << (f.height_cap ? format_double(*f.height_cap) : std::string("none")) << '\n';
  for (int v : order) {
    const Node& nd = f.nodes[v];
    os << id[v] << ' ' << (nd.parent == kNoParent ? -1 : id[nd.parent]) << ' ' << format_double(nd.birth) << ' '
       << format_double(nd.death);
    for (int c : nd.children) os << ' ' << id[c];
    os << '\n';
  }
}

FamilyForest read_forest(std::istream& is) {
  std::string line;
  if (!next_data_line(is, line)) throw InputError("empty forest file");
  auto kv = header_fields(line);
  FamilyForest f;
  const std::string& roots = need(kv, "roots");
  if (!roots.empty())
    for (const auto& r : split(roots, ',')) f.roots.push_back(static_cast<int>(parse_long(r)));
  const std::string& cap = need(kv, "height_cap");
  if (cap != "none") f.height_cap = parse_double(cap);
  while (next_data_line(is, line)) {
    std::istringstream in(line);
    std::vector<std::string> tok;
    std::string t;
    while (in >> t) tok.push_back(t);
    if (tok.size() < 4) throw InputError("forest record needs at least 4 fields: '" + line + "'");
    if (parse_long(tok[0]) != static_cast<long>(f.nodes.size()))
      throw InputError("forest node ids must be consecutive from 0");
    Node nd;
    nd.parent = static_cast<int>(parse_long(tok[1]));
    nd.birth = parse_double(tok[2]);
    nd.death = parse_double(tok[3]);
    for (std::size_t i = 4; i < tok.size(); ++i) nd.children.push_back(static_cast<int>(parse_long(tok[i])));
    f.nodes.push_back(std::move(nd));
  }
  const int n = static_cast<int>(f.nodes.size());
  for (int r : f.roots)
    if (r < 0 || r >= n) throw InputError("root id out of range");
  for (const Node& nd : f.nodes) {
    if (nd.parent < -1 || nd.parent >= n) throw InputError("parent id out of range");
    for (int c : nd.children)
      if (c < 0 || c >= n) throw InputError("child id out of range");
  }
  validate(f);
  assign_labels(f);
  return f;
}

void write_excursion(std::ostream& os, const Excursion& e) {
  os << "speed=" << format_double(e.speed) << '\n';
  for (const auto& b : e.points) os << format_double(b.u) << ' ' << format_double(b.e) << '\n';
}

Excursion read_excursion(std::istream& is) {
  std::string line;
  if (!next_data_line(is, line)) throw InputError("empty excursion file");
  Excursion e;
  e.speed = parse_double(need(header_fields(line), "speed"));
  while (next_data_line(is, line)) {
    std::istringstream in(line);
    std::string a, b, extra;
    if (!(in >> a >> b) || (in >> extra)) throw InputError("excursion line must be 'u e': '" + line + "'");
    e.points.push_back({parse_double(a), parse_double(b)});
  }
  validate(e);
  return e;
}

void write_point_process(std::ostream& os, const GenealogicalPointProcess& p) {
  os << "# t=" << format_double(p.t) << " spacing=" << format_double(p.spacing) << " zero_marks=" << p.zero_marks
     << '\n';
  os << "ell,h,separator\n";
  for (const auto& g : p.points) os << format_double(g.ell) << ',' << format_double(g.h) << ',' << g.separator << '\n';
}

GenealogicalPointProcess read_point_process(std::istream& is) {
  std::string line;
  if (!next_data_line(is, line)) throw InputError("empty point-process file");
  auto kv = header_fields(line);
  GenealogicalPointProcess p;
  p.t = parse_double(need(kv, "t"));
  p.spacing = parse_double(need(kv, "spacing"));
  p.zero_marks = static_cast<std::size_t>(parse_long(need(kv, "zero_marks")));
  if (!next_data_line(is, line) || line.rfind("ell,h", 0) != 0) throw InputError("missing 'ell,h' column header");
  while (next_data_line(is, line)) {
    auto f = split(line, ',');
    if (f.size() < 2 || f.size() > 3) throw InputError("point-process row must be 'ell,h[,separator]'");
    GenealogyPoint g{parse_double(f[0]), parse_double(f[1]), f.size() == 3 && parse_long(f[2]) != 0};
    p.points.push_back(g);
  }
  return p;
}

void write_mass_path(std::ostream& os, const MassPath& p) {
  os << "t,value\n";
  for (std::size_t i = 0; i < p.times.size(); ++i) os << format_double(p.times[i]) << ',' << format_double(p.values[i]) << '\n';
}

MassPath read_mass_path(std::istream& is) {
  std::string line;
  if (!next_data_line(is, line) || line != "t,value") throw InputError("missing 't,value' header");
  MassPath p;
  p.times.clear();
  p.values.clear();
  while (next_data_line(is, line)) {
    auto f = split(line, ',');
    if (f.size() != 2) throw InputError("mass-path row must be 't,value'");
    p.times.push_back(parse_double(f[0]));
    p.values.push_back(parse_double(f[1]));
  }
  if (p.times.empty() || p.times.front() != 0.0) throw InputError("mass path must start at t=0");
  for (std::size_t i = 1; i < p.times.size(); ++i)
    if (p.times[i] < p.times[i - 1]) throw InputError("mass-path times must be nondecreasing");
  return p;
}

void write_diffusion_path(std::ostream& os, const DiffusionPath& p) {
  os << "# dt=" << format_double(p.dt) << " seed=" << p.seed << " horizon=" << format_double(p.horizon())
     << " absorbed_index=" << p.absorbed_index << '\n';
  os << "t,value\n";
  for (std::size_t k = 0; k < p.values.size(); ++k)
    os << format_double(static_cast<double>(k) * p.dt) << ',' << format_double(p.values[k]) << '\n';
}

DiffusionPath read_diffusion_path(std::istream& is) {
  std::string line;
  if (!next_data_line(is, line)) throw InputError("empty diffusion-path file");
  auto kv = header_fields(line);
  DiffusionPath p;
  p.dt = parse_double(need(kv, "dt"));
  p.seed = std::strtoull(need(kv, "seed").c_str(), nullptr, 10);
  p.absorbed_index = parse_long(need(kv, "absorbed_index"));
  if (!(p.dt > 0.0)) throw InputError("dt must be > 0");
  if (!next_data_line(is, line) || line != "t,value") throw InputError("missing 't,value' header");
  while (next_data_line(is, line)) {
    auto f = split(line, ',');
    if (f.size() != 2) throw InputError("path row must be 't,value'");
    p.values.push_back(parse_double(f[1]));
  }
  return p;
}

std::map<std::string, std::string> read_key_values(std::istream& is) {
  std::map<std::string, std::string> kv;
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim_ws(line);
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos)
      throw InputError("config line " + std::to_string(lineno) + ": expected key=value");
    kv[trim_ws(line.substr(0, eq))] = trim_ws(line.substr(eq + 1));
  }
  return kv;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot open '" + path + "' for writing");
  out << content;
  if (!out) throw InputError("write to '" + path + "' failed");
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace catbranch
