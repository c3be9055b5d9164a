#include "dme32/io.hpp"

#include <cctype>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <vector>

#include "dme32/errors.hpp"

namespace dme32 {

namespace {

std::vector<std::string> split_ws(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream ss(line);
  std::string tok;
  while (ss >> tok) out.push_back(tok);
  return out;
}

// reads lines, skipping nothing; missing line -> parse error
class LineReader {
public:
  explicit LineReader(const std::string& text) : ss_(text) {}
  std::string next(const char* what) {
    std::string line;
    if (!std::getline(ss_, line)) fail(errc::parse, std::string("missing line: ") + what);
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return line;
  }
  bool next_if(std::string& line) {
    if (!std::getline(ss_, line)) return false;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return true;
  }
  void expect_end() {
    std::string line;
    while (std::getline(ss_, line)) {
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (!split_ws(line).empty()) fail(errc::parse, "trailing content");
    }
  }

private:
  std::istringstream ss_;
};

int parse_header(const std::string& line, const std::string& magic) {
  auto toks = split_ws(line);
  if (toks.size() != 2 || toks[0] != magic || toks[1].rfind("w=", 0) != 0)
    fail(errc::parse, "bad header, expected '" + magic + " w=<w>'");
  const std::string ws = toks[1].substr(2);
  if (ws.empty() || ws.size() > 2) fail(errc::parse, "bad width");
  for (char c : ws)
    if (c < '0' || c > '9') fail(errc::parse, "bad width");
  int w = std::atoi(ws.c_str());
  if (w < 3 || w > 64) fail(errc::parse, "width out of range");
  return w;
}

// full base modulus polynomial, x^w term included, ceil((w+1)/4) hex digits
std::string mod_to_hex(int w, std::uint64_t low) {
  mpz_class v = (mpz_class(1) << w) | mpz_class(low);
  std::string s = v.get_str(16);
  int digits = (w + 1 + 3) / 4;
  return std::string(digits - s.size(), '0') + s;
}

std::uint64_t mod_from_hex(int w, const std::string& s) {
  int digits = (w + 1 + 3) / 4;
  if ((int)s.size() != digits) fail(errc::parse, "bad modulus width");
  for (char c : s)
    if (!std::isxdigit((unsigned char)c)) fail(errc::parse, "bad hex digit");
  mpz_class v;
  if (mpz_set_str(v.get_mpz_t(), s.c_str(), 16) != 0) fail(errc::parse, "bad modulus hex");
  if (mpz_tstbit(v.get_mpz_t(), w) == 0) fail(errc::parse, "modulus missing leading term");
  mpz_clrbit(v.get_mpz_t(), w);
  if (mpz_sizeinbase(v.get_mpz_t(), 2) > (size_t)w) fail(errc::parse, "modulus degree too high");
  return mpz_get_ui(v.get_mpz_t());
}

mpz_class parse_exp_entry(const std::string& s) {
  if (s.empty()) fail(errc::parse, "empty exponent entry");
  for (char c : s)
    if (c < '0' || c > '9') fail(errc::parse, "bad exponent entry");
  mpz_class v;
  mpz_set_str(v.get_mpz_t(), s.c_str(), 10);
  return v;
}

std::uint64_t parse_u64(const std::string& s, std::uint64_t max) {
  mpz_class v = parse_exp_entry(s);
  if (mpz_sizeinbase(v.get_mpz_t(), 2) > 64 || v > mpz_class(max) || s != v.get_str(10))
    fail(errc::parse, "exponent out of range");
  return mpz_get_ui(v.get_mpz_t());
}

FqElem parse_fq(int w, const std::string& s) {
  try {
    return fq_from_hex(w, s);
  } catch (const dme_error&) {
    fail(errc::parse, "bad field element '" + s + "'");
  }
}

void format_mat_rows(std::ostringstream& out, const char* label, const Mat2& m, int w) {
  for (int r = 0; r < 2; ++r) {
    out << label;
    for (int c = 0; c < 2; ++c) out << ' ' << fq_to_hex(w, m[r][c]);
    out << '\n';
  }
}

void format_mat_rows(std::ostringstream& out, const char* label, const Mat3& m, int w) {
  for (int r = 0; r < 3; ++r) {
    out << label;
    for (int c = 0; c < 3; ++c) out << ' ' << fq_to_hex(w, m[r][c]);
    out << '\n';
  }
}

template <class Mat>
void parse_mat_rows(LineReader& lr, const char* label, Mat& m, int w) {
  const int n = (int)m.size();
  for (int r = 0; r < n; ++r) {
    auto toks = split_ws(lr.next(label));
    if ((int)toks.size() != n + 1 || toks[0] != label)
      fail(errc::parse, std::string("expected row of ") + label);
    for (int c = 0; c < n; ++c) m[r][c] = parse_fq(w, toks[1 + c]);
  }
}

}  // namespace

std::string format_params(const SystemParams& p) {
  const int w = p.tower.base.w;
  std::ostringstream out;
  out << "dme32 w=" << w << '\n';
  out << "base " << mod_to_hex(w, p.tower.base.base_modulus) << '\n';
  out << "quad " << fq_to_hex(w, p.tower.quad_a) << ' ' << fq_to_hex(w, p.tower.quad_b) << '\n';
  out << "cubic " << fq_to_hex(w, p.tower.cubic_c) << ' ' << fq_to_hex(w, p.tower.cubic_d)
      << ' ' << fq_to_hex(w, p.tower.cubic_e) << '\n';
  for (int i = 0; i < 3; ++i) {
    out << 'E';
    for (int j = 0; j < 3; ++j) out << ' ' << p.E.e[i][j].get_str(10);
    out << '\n';
  }
  for (int i = 0; i < 2; ++i) {
    out << 'F';
    for (int j = 0; j < 2; ++j) out << ' ' << p.F.e[i][j].get_str(10);
    out << '\n';
  }
  return out.str();
}

SystemParams parse_params(const std::string& text) {
  LineReader lr(text);
  const int w = parse_header(lr.next("header"), "dme32");
  SystemParams p;
  p.tower.base.w = w;

  auto toks = split_ws(lr.next("base"));
  if (toks.size() != 2 || toks[0] != "base") fail(errc::parse, "expected base line");
  p.tower.base.base_modulus = mod_from_hex(w, toks[1]);

  toks = split_ws(lr.next("quad"));
  if (toks.size() != 3 || toks[0] != "quad") fail(errc::parse, "expected quad line");
  p.tower.quad_a = parse_fq(w, toks[1]);
  p.tower.quad_b = parse_fq(w, toks[2]);

  toks = split_ws(lr.next("cubic"));
  if (toks.size() != 4 || toks[0] != "cubic") fail(errc::parse, "expected cubic line");
  p.tower.cubic_c = parse_fq(w, toks[1]);
  p.tower.cubic_d = parse_fq(w, toks[2]);
  p.tower.cubic_e = parse_fq(w, toks[3]);

  mpz_class q = mpz_class(1) << w;
  p.E.dim = 3;
  p.E.modulus = q * q - 1;
  p.F.dim = 2;
  p.F.modulus = q * q * q - 1;
  for (int i = 0; i < 3; ++i) {
    toks = split_ws(lr.next("E row"));
    if (toks.size() != 4 || toks[0] != "E") fail(errc::parse, "expected E row");
    for (int j = 0; j < 3; ++j) p.E.e[i][j] = parse_exp_entry(toks[1 + j]);
  }
  for (int i = 0; i < 2; ++i) {
    toks = split_ws(lr.next("F row"));
    if (toks.size() != 3 || toks[0] != "F") fail(errc::parse, "expected F row");
    for (int j = 0; j < 2; ++j) p.F.e[i][j] = parse_exp_entry(toks[1 + j]);
  }
  lr.expect_end();
  return p;
}

std::string format_private_key(const PrivateKey& k, int w) {
  std::ostringstream out;
  out << "dme32-key w=" << w << '\n';
  format_mat_rows(out, "L11", k.L11, w);
  format_mat_rows(out, "L12", k.L12, w);
  format_mat_rows(out, "L13", k.L13, w);
  format_mat_rows(out, "L21", k.L21, w);
  format_mat_rows(out, "L22", k.L22, w);
  format_mat_rows(out, "L31", k.L31, w);
  format_mat_rows(out, "L32", k.L32, w);
  return out.str();
}

PrivateKey parse_private_key(const std::string& text, int* w_out) {
  LineReader lr(text);
  const int w = parse_header(lr.next("header"), "dme32-key");
  PrivateKey k;
  parse_mat_rows(lr, "L11", k.L11, w);
  parse_mat_rows(lr, "L12", k.L12, w);
  parse_mat_rows(lr, "L13", k.L13, w);
  parse_mat_rows(lr, "L21", k.L21, w);
  parse_mat_rows(lr, "L22", k.L22, w);
  parse_mat_rows(lr, "L31", k.L31, w);
  parse_mat_rows(lr, "L32", k.L32, w);
  lr.expect_end();
  if (w_out) *w_out = w;
  return k;
}

std::string format_public_key(const PublicKey& pk, int w) {
  std::ostringstream out;
  out << "dme32-pub w=" << w << '\n';
  for (int comp = 0; comp < 6; ++comp) {
    out << "comp " << comp << '\n';
    for (const auto& [mon, c] : pk.polys[comp]) {
      for (int i = 0; i < 6; ++i) out << mon[i] << ' ';
      out << fq_to_hex(w, c) << '\n';
    }
  }
  return out.str();
}

PublicKey parse_public_key(const std::string& text, int* w_out) {
  LineReader lr(text);
  const int w = parse_header(lr.next("header"), "dme32-pub");
  const std::uint64_t emax = (w == 64) ? ~0ULL : ((1ULL << w) - 1);
  PublicKey pk;
  int comp = -1;
  std::string line;
  while (lr.next_if(line)) {
    auto toks = split_ws(line);
    if (toks.empty()) fail(errc::parse, "blank line in public key");
    if (toks[0] == "comp") {
      if (toks.size() != 2) fail(errc::parse, "bad comp line");
      int c = (int)parse_u64(toks[1], 5);
      if (c != comp + 1) fail(errc::parse, "components out of order");
      comp = c;
      continue;
    }
    if (comp < 0) fail(errc::parse, "monomial before any component");
    if (toks.size() != 7) fail(errc::parse, "bad monomial line");
    Monomial mon;
    for (int i = 0; i < 6; ++i) mon[i] = parse_u64(toks[i], emax);
    FqElem c = parse_fq(w, toks[6]);
    if (c == 0) fail(errc::parse, "zero coefficient stored");
    if (!pk.polys[comp].emplace(mon, c).second) fail(errc::parse, "duplicate monomial");
  }
  if (comp != 5) fail(errc::parse, "missing components");
  if (w_out) *w_out = w;
  return pk;
}

std::string format_message(const Vec6& m, int w) {
  std::ostringstream out;
  for (FqElem x : m) out << fq_to_hex(w, x) << '\n';
  return out.str();
}

Vec6 parse_message(const std::string& text, int w) {
  LineReader lr(text);
  Vec6 m;
  for (int i = 0; i < 6; ++i) {
    auto toks = split_ws(lr.next("message line"));
    if (toks.size() != 1) fail(errc::parse, "bad message line");
    m[i] = parse_fq(w, toks[0]);
  }
  lr.expect_end();
  return m;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(errc::parse, "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(errc::parse, "cannot open " + path + " for writing");
  out << text;
  if (!out.flush()) fail(errc::parse, "write failed: " + path);
}

}  // namespace dme32
