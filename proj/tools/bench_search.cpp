// times the L12 candidate search: serial reference vs the OpenMP kernel,
// checking that both return the identical key and candidate count

#include <chrono>
#include <cstdlib>
#include <iostream>

#include "dme32/attack.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

using namespace dme32;

int main(int argc, char** argv) {
  int w = argc > 1 ? std::atoi(argv[1]) : 8;
  int nkeys = argc > 2 ? std::atoi(argv[2]) : 5;
#ifdef _OPENMP
  int workers = argc > 3 ? std::atoi(argv[3]) : omp_get_max_threads();
#else
  int workers = argc > 3 ? std::atoi(argv[3]) : 2;
#endif

  System sys(gen_system_params(w, 4));
  double serial_total = 0, parallel_total = 0;
  for (int seed = 0; seed < nkeys; ++seed) {
    PrivateKey sk = keygen(sys, (std::uint64_t)seed);
    PublicKey pk = derive_public_key(sk, sys);
    RecoveredL1 rec = recover_l1(pk, sys);

    auto t0 = std::chrono::steady_clock::now();
    SearchResult a = search_l12_serial(rec.pk, rec, sys);
    auto t1 = std::chrono::steady_clock::now();
    SearchResult b = search_l12(rec.pk, rec, sys, workers);
    auto t2 = std::chrono::steady_clock::now();

    double ts = std::chrono::duration<double, std::milli>(t1 - t0).count();
    double tp = std::chrono::duration<double, std::milli>(t2 - t1).count();
    serial_total += ts;
    parallel_total += tp;
    bool same = a.candidates_tried == b.candidates_tried && a.key == b.key;
    std::cout << "seed=" << seed << " candidates=" << a.candidates_tried << " serial_ms=" << ts
              << " parallel_ms=" << tp << " match=" << (same ? "yes" : "NO") << "\n";
    if (!same) return 1;
  }
  std::cout << "total serial_ms=" << serial_total << " parallel_ms=" << parallel_total
            << " workers=" << workers
            << " speedup=" << (parallel_total > 0 ? serial_total / parallel_total : 0) << "\n";
  return 0;
}
