#include "maxnorm/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

namespace maxnorm {

namespace {

std::ifstream open_or_throw(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ArgumentError("cannot open file: " + path);
  return in;
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = line.find(sep, start);
    if (pos == std::string::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
}

bool parse_double(const std::string& s, double* out) {
  const char* b = s.data();
  const char* e = s.data() + s.size();
  while (b < e && (*b == ' ' || *b == '\t' || *b == '\r')) ++b;
  while (e > b && (e[-1] == ' ' || e[-1] == '\t' || e[-1] == '\r')) --e;
  if (b == e) return false;
  auto [ptr, ec] = std::from_chars(b, e, *out);
  return ec == std::errc() && ptr == e;
}

std::string format_double(double v) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  (void)ec;
  return std::string(buf, ptr);
}

}  // namespace

RatingDataset load_movielens(const std::string& path) {
  std::ifstream in = open_or_throw(path);
  RatingDataset ds;
  ds.r_min = 1.0;
  ds.r_max = 5.0;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line == "\r") continue;
    std::istringstream row(line);
    long user = 0, item = 0, timestamp = 0;
    double rating = 0.0;
    if (!(row >> user >> item >> rating >> timestamp))
      throw ParseError("movielens: malformed row", lineno);
    std::string rest;
    if (row >> rest) throw ParseError("movielens: trailing fields", lineno);
    if (user < 1 || item < 1) throw ParseError("movielens: ids are 1-based", lineno);
    if (rating < ds.r_min || rating > ds.r_max)
      throw ParseError("movielens: rating outside [1, 5]", lineno);
    ds.n_users = std::max<Index>(ds.n_users, user);
    ds.n_items = std::max<Index>(ds.n_items, item);
    ds.ratings.push_back({user - 1, item - 1, rating});
  }
  if (ds.ratings.empty()) throw ArgumentError("movielens: empty file: " + path);
  return ds;
}

RatingDataset load_jester(const std::string& path) {
  constexpr Index kJokes = 100;
  constexpr double kSentinel = 99.0;
  std::ifstream in = open_or_throw(path);
  RatingDataset ds;
  ds.n_items = kJokes;
  ds.r_min = -10.0;
  ds.r_max = 10.0;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line == "\r") continue;
    const std::vector<std::string> fields = split(line, ',');
    if (static_cast<Index>(fields.size()) != kJokes + 1)
      throw ParseError("jester: expected 101 columns", lineno);
    const Index user = ds.n_users;
    for (Index j = 0; j < kJokes; ++j) {
      double v = 0.0;
      if (!parse_double(fields[j + 1], &v)) throw ParseError("jester: bad number", lineno);
      if (v == kSentinel) continue;
      if (v < ds.r_min || v > ds.r_max)
        throw ParseError("jester: rating outside [-10, 10]", lineno);
      ds.ratings.push_back({user, j, v});
    }
    ++ds.n_users;
  }
  if (ds.ratings.empty()) throw ArgumentError("jester: no ratings in " + path);
  return ds;
}

RealSplit split_real(const RatingDataset& ds, Index n_u, SchemeKind kind, double sr,
                     std::uint64_t seed) {
  if (n_u < 1 || n_u > ds.n_users) throw ArgumentError("split_real: n_u out of range");
  if (sr <= 0.0 || sr > 1.0) throw ArgumentError("split_real: sr outside (0, 1]");
  const Index n_items = ds.n_items;
  Rng rng(seed);

  // Random user subsample; its order is the row permutation.
  std::vector<Index> users(ds.n_users);
  std::iota(users.begin(), users.end(), Index{0});
  for (Index i = ds.n_users - 1; i > 0; --i)
    std::swap(users[i], users[rng.below(static_cast<std::uint64_t>(i) + 1)]);
  users.resize(n_u);
  std::unordered_map<Index, Index> user_row;
  user_row.reserve(n_u);
  for (Index i = 0; i < n_u; ++i) user_row.emplace(users[i], i);

  // Column permutation.
  std::vector<Index> item_col(n_items);
  std::iota(item_col.begin(), item_col.end(), Index{0});
  for (Index i = n_items - 1; i > 0; --i)
    std::swap(item_col[i], item_col[rng.below(static_cast<std::uint64_t>(i) + 1)]);

  std::unordered_map<std::int64_t, double> available;
  for (const auto& r : ds.ratings) {
    auto it = user_row.find(r.row);
    if (it == user_row.end()) continue;
    const Index row = it->second;
    const Index col = item_col[r.col];
    available[static_cast<std::int64_t>(row) * n_items + col] = r.value;
  }
  if (available.empty()) throw ArgumentError("split_real: subsample holds no ratings");

  const auto n_cand = static_cast<std::int64_t>(
      std::llround(sr * static_cast<double>(n_u) * static_cast<double>(n_items)));
  const Vector p_rows = row_profile_for_dim(kind, n_u);
  const Vector p_cols = row_profile_for_dim(kind, n_items);
  IndexSampler sampler(p_rows, p_cols);

  std::unordered_set<std::int64_t> candidates;
  candidates.reserve(static_cast<std::size_t>(n_cand) * 2);
  while (candidates.size() < static_cast<std::size_t>(n_cand)) {
    auto [row, col] = sampler.draw(rng);
    candidates.insert(static_cast<std::int64_t>(row) * n_items + col);
  }

  RealSplit out;
  out.train = ObservationSet(n_u, n_items);
  out.test = ObservationSet(n_u, n_items);
  out.n_candidates = static_cast<Index>(candidates.size());
  for (const auto& [key, value] : available) {
    const Index row = static_cast<Index>(key / n_items);
    const Index col = static_cast<Index>(key % n_items);
    if (candidates.count(key) > 0)
      out.train.entries.push_back({row, col, value});
    else
      out.test.entries.push_back({row, col, value});
  }
  if (out.train.empty()) throw ArgumentError("split_real: empty training split");
  auto order = [n_items](const Observation& a, const Observation& b) {
    return a.row * n_items + a.col < b.row * n_items + b.col;
  };
  std::sort(out.train.entries.begin(), out.train.entries.end(), order);
  std::sort(out.test.entries.begin(), out.test.entries.end(), order);
  out.realized_ratio = static_cast<double>(out.train.size()) /
                       (static_cast<double>(n_u) * static_cast<double>(n_items));
  return out;
}

void save_observations(const std::string& path, const ObservationSet& obs) {
  std::ostringstream ss;
  ss << obs.d1 << ' ' << obs.d2 << ' ' << obs.size() << '\n';
  for (const auto& e : obs.entries)
    ss << e.row << ' ' << e.col << ' ' << format_double(e.value) << '\n';
  write_text_file(path, ss.str());
}

ObservationSet load_observations(const std::string& path) {
  std::ifstream in = open_or_throw(path);
  Index d1 = 0, d2 = 0;
  std::size_t count = 0;
  if (!(in >> d1 >> d2 >> count)) throw ParseError("observations: bad header", 1);
  ObservationSet obs(d1, d2);
  obs.entries.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    Index row = 0, col = 0;
    std::string value_text;
    if (!(in >> row >> col >> value_text)) throw ParseError("observations: truncated", i + 2);
    double value = 0.0;
    if (!parse_double(value_text, &value)) throw ParseError("observations: bad value", i + 2);
    obs.add(row, col, value);
  }
  return obs;
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path);
  if (!out) throw ArgumentError("cannot write file: " + path);
  out << content;
  if (!out) throw ArgumentError("failed writing file: " + path);
}

void write_manifest(const std::string& path,
                    const std::vector<std::pair<std::string, std::string>>& entries) {
  std::ostringstream ss;
  for (const auto& [key, value] : entries) ss << key << " = " << value << '\n';
  write_text_file(path, ss.str());
}

}  // namespace maxnorm
