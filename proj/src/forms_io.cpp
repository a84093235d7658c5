#include <array>
#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <vector>

#include "encl/forms.hpp"

namespace encl {

namespace {

constexpr std::array<const char*, 3> kSections = {"%M0", "%M1", "%M2"};

void write_section(std::ostream& os, const char* header, const SymMatrix& m) {
  os << header << '\n';
  std::array<char, 64> buf{};
  for (Index i = 0; i < m.size(); ++i) {
    for (Index j = i; j < m.size(); ++j) {
      const double v = m(i, j);
      if (v == 0.0) continue;
      const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
      os << i + 1 << ' ' << j + 1 << ' ' << std::string_view(buf.data(), res.ptr - buf.data())
         << '\n';
    }
  }
}

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

template <class T>
bool parse_token(std::string_view tok, T& out) {
  const auto res = std::from_chars(tok.data(), tok.data() + tok.size(), out);
  return res.ec == std::errc() && res.ptr == tok.data() + tok.size();
}

std::vector<std::string_view> split_ws(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t pos = 0;
  while (pos < s.size()) {
    const auto b = s.find_first_not_of(" \t", pos);
    if (b == std::string_view::npos) break;
    auto e = s.find_first_of(" \t", b);
    if (e == std::string_view::npos) e = s.size();
    out.push_back(s.substr(b, e - b));
    pos = e;
  }
  return out;
}

}  // namespace

void write_forms(std::ostream& os, const TrialForms& forms) {
  os << forms.dim() << '\n';
  write_section(os, kSections[0], forms.m0());
  write_section(os, kSections[1], forms.m1());
  write_section(os, kSections[2], forms.m2());
}

void write_forms_file(const std::string& path, const TrialForms& forms) {
  std::ofstream os(path);
  if (!os) throw Error("cannot open " + path + " for writing");
  write_forms(os, forms);
  if (!os) throw Error("failed writing " + path);
}

TrialForms read_forms(std::istream& is) {
  std::string raw;
  std::size_t line_no = 0;
  long n = -1;
  int section = -1;
  std::array<Matrix, 3> mats;
  std::array<bool, 3> seen{};
  std::vector<std::vector<char>> filled;

  while (std::getline(is, raw)) {
    ++line_no;
    const std::string_view line = trim(raw);
    if (line.empty() || line.front() == '#') continue;

    if (n < 0) {
      if (!parse_token(line, n) || n < 0) throw FormatError(line_no, "expected dimension n");
      for (auto& m : mats) m = Matrix::Zero(n, n);
      continue;
    }
    if (line.front() == '%') {
      section = -1;
      for (int s = 0; s < 3; ++s)
        if (line == kSections[static_cast<std::size_t>(s)]) section = s;
      if (section < 0) throw FormatError(line_no, "unknown section '" + std::string(line) + "'");
      if (seen[static_cast<std::size_t>(section)])
        throw FormatError(line_no, "duplicate section " + std::string(line));
      seen[static_cast<std::size_t>(section)] = true;
      filled.assign(static_cast<std::size_t>(n), std::vector<char>(static_cast<std::size_t>(n), 0));
      continue;
    }
    if (section < 0) throw FormatError(line_no, "entry outside of a %M section");

    const auto toks = split_ws(line);
    long i = 0, j = 0;
    double v = 0.0;
    if (toks.size() != 3 || !parse_token(toks[0], i) || !parse_token(toks[1], j) ||
        !parse_token(toks[2], v))
      throw FormatError(line_no, "expected 'i j value'");
    if (i < 1 || j < 1 || i > n || j > n) throw FormatError(line_no, "index out of range");
    if (i > j) std::swap(i, j);
    auto& flag = filled[static_cast<std::size_t>(i - 1)][static_cast<std::size_t>(j - 1)];
    if (flag) throw FormatError(line_no, "duplicate entry");
    flag = 1;
    auto& m = mats[static_cast<std::size_t>(section)];
    m(i - 1, j - 1) = v;
    m(j - 1, i - 1) = v;
  }
  if (n < 0) throw FormatError(line_no, "empty input");
  for (std::size_t s = 0; s < 3; ++s)
    if (!seen[s]) throw FormatError(line_no, std::string("missing section ") + kSections[s]);
  return TrialForms(SymMatrix::checked(std::move(mats[0])), SymMatrix::checked(std::move(mats[1])),
                    SymMatrix::checked(std::move(mats[2])));
}

TrialForms read_forms_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw Error("cannot open " + path);
  return read_forms(is);
}

}  // namespace encl
