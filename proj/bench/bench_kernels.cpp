// Serial reference vs OpenMP kernels: wall time and result equality.
#include <omp.h>

#include <chrono>
#include <cstdio>
#include <random>
#include <string>

#include "CLI11.hpp"
#include "mts/certificate.hpp"
#include "mts/family.hpp"
#include "mts/norm.hpp"

namespace {

using Clock = std::chrono::steady_clock;

template <class F>
double seconds(F&& f) {
  const auto t0 = Clock::now();
  f();
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

void report(const char* name, double serial, double parallel, bool same) {
  std::printf("%-28s serial %8.3fs  parallel %8.3fs  speedup %5.2fx  %s\n", name, serial, parallel,
              parallel > 0 ? serial / parallel : 0.0, same ? "identical" : "MISMATCH");
}

std::vector<mts::Vector> random_vectors(std::uint64_t seed, int count, int universe, int support) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> num(-4, 4), den(1, 3);
  std::vector<mts::Vector> out;
  for (int i = 0; i < count; ++i) {
    std::vector<int> idx(static_cast<std::size_t>(universe));
    for (int k = 0; k < universe; ++k) idx[static_cast<std::size_t>(k)] = k + 1;
    std::shuffle(idx.begin(), idx.end(), rng);
    std::vector<mts::Vector::Entry> e;
    for (int k = 0; k < support; ++k) {
      mts::Rational q(num(rng), den(rng));
      q.canonicalize();
      e.emplace_back(idx[static_cast<std::size_t>(k)], q);
    }
    out.emplace_back(std::move(e));
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Serial vs parallel kernel benchmark"};
  std::uint64_t seed = 1;
  int batch = 200, support = 10, wide = 22, universe = 15;
  app.add_option("--seed", seed)->capture_default_str();
  app.add_option("--batch", batch, "Vectors in the batch run")->capture_default_str();
  app.add_option("--support", support, "Support size in the batch run")->capture_default_str();
  app.add_option("--wide", wide, "Support size of the single-vector DP run")->capture_default_str();
  app.add_option("--universe", universe, "N for subset_check")->capture_default_str();
  CLI11_PARSE(app, argc, argv);

  std::printf("threads: %d\n", omp_get_max_threads());
  const auto sp = mts::schreier_space();

  {
    const auto xs = random_vectors(seed, batch, 3 * support, support);
    std::vector<mts::NormResult> a, b;
    const double ts = seconds([&] { a = mts::norm_batch_serial(xs, sp); });
    const double tp = seconds([&] { b = mts::norm_batch(xs, sp); });
    bool same = a.size() == b.size();
    for (std::size_t i = 0; same && i < a.size(); ++i)
      same = a[i].value == b[i].value && mts::certificate_to_json(a[i].cert) == mts::certificate_to_json(b[i].cert);
    report("norm_batch", ts, tp, same);
  }

  {
    const auto x = random_vectors(seed + 1, 1, 2 * wide, wide).front();
    mts::NormResult a, b;
    const double ts = seconds([&] { a = mts::norm_serial(x, sp); });
    const double tp = seconds([&] { b = mts::norm(x, sp); });
    report("norm (interval DP)", ts, tp,
           a.value == b.value && mts::certificate_to_json(a.cert) == mts::certificate_to_json(b.cert));
  }

  {
    const auto f = mts::parse_family("S[2].apply(A[3])");
    const auto g = mts::parse_family("S[2]^2");
    mts::SubsetResult a, b;
    const double ts = seconds([&] { a = mts::subset_check_serial(f, g, universe); });
    const double tp = seconds([&] { b = mts::subset_check(f, g, universe); });
    report("subset_check", ts, tp, a.holds == b.holds && a.counterexample == b.counterexample);
  }
  return 0;
}
