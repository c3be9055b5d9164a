#pragma once

// Key recovery from the public key alone: the L11/L13/c/eta stage reads
// Lemma-4 coefficient columns, the L2/L3 stage reconstructs the reduced map
// L3.F.L2 and solves for its theta/zeta parameters, and an exhaustive search
// closes the two remaining L12 unknowns.

#include <cstdint>
#include <optional>
#include <vector>

#include "dme32/dme.hpp"

namespace dme32 {

struct EtaColumns {
  std::array<FqElem, 6> col_c{}, col_f{}, col_g{}, col_h{};
};

// f = l11^E21 l31^E23, g = l11^E21 l32^E23, h = l31^E23; the primed values
// carry a factor 1/c on the T coordinate
struct FGHValues {
  FqElem f1 = 0, f2p = 0, g1 = 0, g2p = 0, h1 = 0, h2p = 0;
};

struct L1Blocks {
  Mat2 L11{}, L12{}, L13{};
};

struct RecoveredL1 {
  Mat2 L11{}, L13{};
  FqElem c = 0;
  std::array<FqElem, 6> eta{};
  // variable change x5 <- x5 + t5*x6, x6 <- x6 + t6*x5 applied before
  // recovery; (0,0) means none
  FqElem subst_t5 = 0, subst_t6 = 0;
  PublicKey pk;  // the (possibly substituted) public key the recovery ran on
};

// z[(i,j)] = output vector of the reduced map at the indicator pair e_i+e_j,
// i in {0,1,2}, j in {3,4,5}; index 3*i + (j-3)
struct ZTable {
  std::array<std::array<FqElem, 6>, 9> z{};
  const std::array<FqElem, 6>& at(int i, int j) const { return z[3 * i + (j - 3)]; }
  std::array<FqElem, 6>& at(int i, int j) { return z[3 * i + (j - 3)]; }
};

struct ThetaCandidate {
  Ext3Elem th1, th2;
};

EtaColumns extract_eta_columns(const PublicKey& pk, const System& sys);
FGHValues recover_fgh(const EtaColumns& cols, const System& sys);
FqElem solve_c(const FGHValues& fgh, const System& sys);

// x5 <- x5 + t5*x6, x6 <- x6 + t6*x5 on the public key, by char-2 binomial
// re-expansion; requires t5*t6 != 1
PublicKey substitute_x5x6(const PublicKey& pk, const System& sys, FqElem t5, FqElem t6);

// direct recovery with the degenerate-branch fallback sweep
RecoveredL1 recover_l1(const PublicKey& pk, const System& sys);

// R(v) = pk(L1^{-1}(E^{-1}-map(v))); equals L3(F-map(L2(v))) for the true L1
Vec6 reduced_eval(const PublicKey& pk, const L1Blocks& l1, const System& sys, const Vec6& v);

// reconstructs the 18-monomial form of the reduced map from sampled
// evaluations; nullopt when the samples are inconsistent with that form
// (wrong candidate) or rank-deficient
std::optional<ZTable> collect_z(const PublicKey& pk, const L1Blocks& l1, const System& sys,
                                std::uint64_t seed);

// candidates for (theta1, theta2) (half 0) or (theta4, theta5) (half 1);
// resultant degree reported for diagnostics, -1 if none was computed
std::vector<ThetaCandidate> solve_thetas(const ZTable& z, int half, const System& sys,
                                         int* resultant_degree = nullptr);

// zetas for the five base pairs plus full 18-equation verification
std::array<Ext3Elem, 6> recover_zetas(const ThetaCandidate& top, const ThetaCandidate& bot,
                                      const ZTable& z, const System& sys);

// full L2/L3 recovery for one L1 candidate; nullopt signals a wrong candidate
std::optional<PrivateKey> recover_l2l3(const PublicKey& pk, const L1Blocks& l1,
                                       const System& sys, std::uint64_t seed = 0,
                                       int* dtop = nullptr, int* dbot = nullptr);

struct SearchResult {
  PrivateKey key;
  std::uint64_t candidates_tried = 0;
  int resultant_deg_top = -1, resultant_deg_bot = -1;
};

// enumerates L12 = (u,1;v,0) over u in F_q, v in F_q*; returns the first
// candidate passing the consistency prefilter and full verification
SearchResult search_l12(const PublicKey& pk, const RecoveredL1& rec, const System& sys,
                        int workers);
// single-threaded reference with identical iteration order and result
SearchResult search_l12_serial(const PublicKey& pk, const RecoveredL1& rec, const System& sys);

struct AttackReport {
  bool degenerate_branch = false;  // recovery needed the variable-change fallback
  FqElem subst_t5 = 0, subst_t6 = 0;
  std::uint64_t candidates_tried = 0;
  int resultant_deg_top = -1, resultant_deg_bot = -1;
  double l1_millis = 0, search_millis = 0;
  bool verified = false;
  std::string summary() const;       // human-readable multi-line text
  std::string machine_line() const;  // "candidates_tried=N branch=... verified=..."
};

std::pair<PrivateKey, AttackReport> full_attack(const PublicKey& pk, const System& sys,
                                                int workers = 1);

}  // namespace dme32
