// L12 candidate enumeration. The per-candidate consistency test reuses a fixed
// sample set: the reduced-map monomial rows depend only on the samples, so the
// two left-null combinations of the row matrix are precomputed once and each
// candidate only has to produce the value side and check that both
// combinations still vanish. Survivors (a ~q^-12 event for wrong candidates)
// go through the full theta/zeta recovery and public-key comparison.

#include <algorithm>
#include <random>
#include <vector>

#include "dme32/attack.hpp"
#include "dme32/errors.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace dme32 {

namespace {

constexpr std::uint64_t kSampleSeed = 0x5eed5a170e5ULL;
constexpr std::uint64_t kVerifySeedBase = 0xc0ffee00ULL;
constexpr std::uint64_t kChunk = 4096;

FqElem pw(const BaseField& f, FqElem x, std::uint64_t e) {
  if (e == 0) return 1;
  if (x == 0) return 0;
  return f.pow_u(x, e);
}

struct Precomp {
  int nrows = 0;
  std::vector<std::array<FqElem, 2>> y34;     // per sample: Einv-image coords y3, y4
  std::vector<std::array<FqElem, 2>> lambda;  // per sample: the two null-combination weights
  std::vector<std::uint64_t> e3s, e4s;        // distinct x3/x4 exponents over all components
  std::array<std::vector<std::array<int, 2>>, 6> pidx;  // per component: (e3,e4) index pairs
  std::vector<std::array<std::vector<FqElem>, 6>> part;  // [sample][comp][pair]: fixed factor
};

Precomp build_precomp(const PublicKey& pk, const RecoveredL1& rec, const System& sys) {
  const BaseField& f = sys.base();
  const std::uint64_t mask = f.order();

  std::uint64_t F11 = sys.canon(sys.F().e[0][0]), F12 = sys.canon(sys.F().e[0][1]);
  std::uint64_t F21 = sys.canon(sys.F().e[1][0]), F22 = sys.canon(sys.F().e[1][1]);
  std::vector<std::array<std::uint64_t, 4>> monos;
  for (int fam = 0; fam < 2; ++fam) {
    std::uint64_t ea = fam == 0 ? F11 : F21, eb = fam == 0 ? F12 : F22;
    for (std::uint64_t i = 0; i < 3; ++i)
      for (std::uint64_t j = 3; j < 6; ++j) {
        std::array<std::uint64_t, 4> key{i, j, ea, eb};
        if (std::find(monos.begin(), monos.end(), key) == monos.end()) monos.push_back(key);
      }
  }
  const int K = (int)monos.size();
  const int nrows = K + 2;

  Precomp pc;
  pc.nrows = nrows;
  Mat2 i11 = mat2_inv(f, rec.L11), i13 = mat2_inv(f, rec.L13);

  for (std::uint64_t restart = 0;; ++restart) {
    if (restart > 32) fail(errc::degenerate_system, "sample rows stay rank deficient");
    std::mt19937_64 rng(kSampleSeed * 0x9e3779b97f4a7c15ULL + restart);
    std::vector<Vec6> samples;
    std::vector<std::vector<FqElem>> rows;
    int tries = 0;
    while ((int)samples.size() < nrows) {
      if (++tries > 1000) fail(errc::degenerate_system, "cannot sample nonzero blocks");
      Vec6 v;
      for (auto& x : v) x = rng() & mask;
      if ((v[0] | v[1]) == 0 || (v[2] | v[3]) == 0 || (v[4] | v[5]) == 0) continue;
      std::vector<FqElem> row(K, 0);
      for (int m = 0; m < K; ++m)
        row[m] = f.mul(f.pow_u(v[monos[m][0]], monos[m][2]), f.pow_u(v[monos[m][1]], monos[m][3]));
      // distinct (i,j,ea,eb) keys make each row entry a single product
      samples.push_back(v);
      rows.push_back(std::move(row));
    }

    // left null space via elimination with an identity augmentation
    std::vector<std::vector<FqElem>> aug(nrows, std::vector<FqElem>(nrows, 0));
    for (int i = 0; i < nrows; ++i) aug[i][i] = 1;
    int r = 0;
    bool deficient = false;
    for (int col = 0; col < K; ++col) {
      int sel = -1;
      for (int t = r; t < nrows; ++t)
        if (rows[t][col] != 0) {
          sel = t;
          break;
        }
      if (sel < 0) {
        deficient = true;
        break;
      }
      std::swap(rows[r], rows[sel]);
      std::swap(aug[r], aug[sel]);
      FqElem pv = f.inv(rows[r][col]);
      for (auto& x : rows[r]) x = f.mul(x, pv);
      for (auto& x : aug[r]) x = f.mul(x, pv);
      for (int t = 0; t < nrows; ++t)
        if (t != r && rows[t][col] != 0) {
          FqElem ft = rows[t][col];
          for (int c = 0; c < K; ++c) rows[t][c] ^= f.mul(ft, rows[r][c]);
          for (int c = 0; c < nrows; ++c) aug[t][c] ^= f.mul(ft, aug[r][c]);
        }
      ++r;
    }
    if (deficient) continue;

    pc.lambda.assign(nrows, {0, 0});
    for (int t = 0; t < 2; ++t)
      for (int s = 0; s < nrows; ++s) pc.lambda[s][t] = aug[K + t][s];

    pc.y34.clear();
    for (const Vec6& v : samples) {
      Vec6 y = unblock2(exp_map(sys, sys.Einv(), reblock2(v)));
      pc.y34.push_back({y[2], y[3]});
    }

    // split every public monomial into its fixed part and its (x3,x4) part
    auto expo_index = [](std::vector<std::uint64_t>& lst, std::uint64_t e) -> int {
      auto it = std::find(lst.begin(), lst.end(), e);
      if (it != lst.end()) return (int)(it - lst.begin());
      lst.push_back(e);
      return (int)lst.size() - 1;
    };
    std::array<std::vector<std::array<std::uint64_t, 2>>, 6> comp_pairs;
    for (int comp = 0; comp < 6; ++comp) {
      for (const auto& [ev, cf] : pk.polys[comp]) {
        std::array<std::uint64_t, 2> pr{ev[2], ev[3]};
        if (std::find(comp_pairs[comp].begin(), comp_pairs[comp].end(), pr) ==
            comp_pairs[comp].end()) {
          comp_pairs[comp].push_back(pr);
          pc.pidx[comp].push_back({expo_index(pc.e3s, ev[2]), expo_index(pc.e4s, ev[3])});
        }
      }
    }
    if (pc.e3s.size() > 16 || pc.e4s.size() > 16)
      fail(errc::degenerate_system, "unexpected exponent variety in public key");
    pc.part.assign(nrows, {});
    for (int s = 0; s < nrows; ++s) {
      Vec6 y = unblock2(exp_map(sys, sys.Einv(), reblock2(samples[s])));
      auto x12 = mat2_vec(f, i11, {y[0], y[1]});
      auto x56 = mat2_vec(f, i13, {y[4], y[5]});
      for (int comp = 0; comp < 6; ++comp) {
        pc.part[s][comp].assign(comp_pairs[comp].size(), 0);
        for (const auto& [ev, cf] : pk.polys[comp]) {
          std::array<std::uint64_t, 2> pr{ev[2], ev[3]};
          size_t k = std::find(comp_pairs[comp].begin(), comp_pairs[comp].end(), pr) -
                     comp_pairs[comp].begin();
          FqElem fixed = f.mul(cf, f.mul(f.mul(pw(f, x12[0], ev[0]), pw(f, x12[1], ev[1])),
                                         f.mul(pw(f, x56[0], ev[4]), pw(f, x56[1], ev[5]))));
          pc.part[s][comp][k] ^= fixed;
        }
      }
    }
    return pc;
  }
}

bool candidate_consistent(const Precomp& pc, const BaseField& f, FqElem u, FqElem v) {
  FqElem vinv = f.inv(v);
  std::array<std::array<FqElem, 6>, 2> acc{};
  std::array<FqElem, 16> p3, p4;
  for (int s = 0; s < pc.nrows; ++s) {
    FqElem x3 = f.mul(pc.y34[s][1], vinv);
    FqElem x4 = pc.y34[s][0] ^ f.mul(u, x3);
    for (size_t i = 0; i < pc.e3s.size(); ++i) p3[i] = pw(f, x3, pc.e3s[i]);
    for (size_t i = 0; i < pc.e4s.size(); ++i) p4[i] = pw(f, x4, pc.e4s[i]);
    const auto lam = pc.lambda[s];
    for (int comp = 0; comp < 6; ++comp) {
      FqElem val = 0;
      const auto& idx = pc.pidx[comp];
      const auto& prt = pc.part[s][comp];
      for (size_t k = 0; k < idx.size(); ++k)
        val ^= f.mul(prt[k], f.mul(p3[idx[k][0]], p4[idx[k][1]]));
      acc[0][comp] ^= f.mul(lam[0], val);
      acc[1][comp] ^= f.mul(lam[1], val);
    }
  }
  for (int t = 0; t < 2; ++t)
    for (int comp = 0; comp < 6; ++comp)
      if (acc[t][comp] != 0) return false;
  return true;
}

std::optional<SearchResult> verify_candidate(const PublicKey& pk, const RecoveredL1& rec,
                                             const System& sys, std::uint64_t u,
                                             std::uint64_t v, std::uint64_t tried) {
  L1Blocks l1{rec.L11, Mat2{{{u, 1}, {v, 0}}}, rec.L13};
  int dt = -1, db = -1;
  auto key = recover_l2l3(pk, l1, sys, kVerifySeedBase + tried, &dt, &db);
  if (!key) return std::nullopt;
  return SearchResult{*key, tried, dt, db};
}

}  // namespace

SearchResult search_l12_serial(const PublicKey& pk, const RecoveredL1& rec, const System& sys) {
  const BaseField& f = sys.base();
  const std::uint64_t mask = f.order();
  Precomp pc = build_precomp(pk, rec, sys);
  std::uint64_t tried = 0;
  for (std::uint64_t u = 0;; ++u) {
    for (std::uint64_t v = 1;; ++v) {
      ++tried;
      if (candidate_consistent(pc, f, u, v)) {
        auto res = verify_candidate(pk, rec, sys, u, v, tried);
        if (res) return *res;
      }
      if (v == mask) break;
    }
    if (u == mask) break;
  }
  fail(errc::search_exhausted, "no L12 candidate produced the public key");
}

SearchResult search_l12(const PublicKey& pk, const RecoveredL1& rec, const System& sys,
                        int workers) {
  // chunk indices fit 64 bits only for moderate widths; wider fields fall back
  if (workers <= 1 || sys.w() > 30) return search_l12_serial(pk, rec, sys);
  const BaseField& f = sys.base();
  const std::uint64_t mask = f.order();
  const std::uint64_t total = (mask + 1) * mask;
  Precomp pc = build_precomp(pk, rec, sys);

  for (std::uint64_t base = 0; base < total; base += kChunk) {
    const std::uint64_t end = std::min(base + kChunk, total);
    std::vector<std::uint64_t> hits;
#ifdef _OPENMP
#pragma omp parallel num_threads(workers)
    {
      std::vector<std::uint64_t> local;
#pragma omp for nowait schedule(static)
      for (long long idx = (long long)base; idx < (long long)end; ++idx) {
        std::uint64_t u = (std::uint64_t)idx / mask;
        std::uint64_t v = (std::uint64_t)idx % mask + 1;
        if (candidate_consistent(pc, f, u, v)) local.push_back((std::uint64_t)idx);
      }
#pragma omp critical
      hits.insert(hits.end(), local.begin(), local.end());
    }
#else
    for (std::uint64_t idx = base; idx < end; ++idx) {
      std::uint64_t u = idx / mask, v = idx % mask + 1;
      if (candidate_consistent(pc, f, u, v)) hits.push_back(idx);
    }
#endif
    std::sort(hits.begin(), hits.end());
    for (std::uint64_t idx : hits) {
      std::uint64_t u = idx / mask, v = idx % mask + 1;
      auto res = verify_candidate(pk, rec, sys, u, v, idx + 1);
      if (res) return *res;
    }
  }
  fail(errc::search_exhausted, "no L12 candidate produced the public key");
}

}  // namespace dme32
