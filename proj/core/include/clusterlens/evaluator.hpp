#ifndef CLUSTERLENS_EVALUATOR_HPP
#define CLUSTERLENS_EVALUATOR_HPP

#include <clusterlens/sympoly.hpp>
#include <clusterlens/valuation.hpp>

#include <filesystem>
#include <future>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

namespace clusterlens {

// A monic separable input c_f * (x^d + a_{d-1} x^{d-1} + ... + a_0); the
// algorithm consumes only the a_i, ord(c_f) is recorded for downstream use.
struct MonicInput {
  ValuedContext ctx;
  int d = 0;
  std::vector<Rational> a;  // a_0 .. a_{d-1}
  Valuation ord_cf;

  // a_low_to_high = a_0..a_{d-1}.  Separability is checked at use sites
  // (it needs the degree-d discriminant).
  static MonicInput make(const ValuedContext& ctx, std::vector<Rational> a_low_to_high,
                         const Rational& c_f = Rational(1));
};

// Directory-backed store of graph invariants plus the discriminant per
// degree.  Concurrent get_or_compute calls for one key compute at most once
// (other callers block on the same future); on-disk records are written
// atomically and byte-deterministically.
class CacheStore {
public:
  // Empty dir means purely in-memory (no persistence).
  explicit CacheStore(std::filesystem::path dir = {});

  static constexpr int kFormatVersion = 1;

  const std::filesystem::path& dir() const { return dir_; }
  bool persistent() const { return !dir_.empty(); }

  GraphInvariant get_or_compute(const WeightedGraph& g);
  ElemPoly get_delta(int d);

  struct Stats {
    std::uint64_t memory_hits = 0;
    std::uint64_t disk_loads = 0;
    std::uint64_t computes = 0;
  };
  Stats stats() const;

private:
  GraphInvariant load_or_compute(const WeightedGraph& g, const std::string& canon);
  std::optional<GraphInvariant> load_from_disk(const std::string& canon, int d);
  void persist(const GraphInvariant& inv, const std::string& canon);

  std::filesystem::path dir_;
  mutable std::mutex mu_;
  std::map<std::string, std::shared_future<GraphInvariant>> inflight_;
  std::map<int, ElemPoly> deltas_;
  Stats stats_;
};

std::string serialize_invariant(const GraphInvariant& inv);
GraphInvariant parse_invariant(const std::string& text);

// ord(J_{G,f}) = ord(g(a)) - k * ord(Delta(a)); +inf iff g(a) = 0.
Valuation ord_j(const GraphInvariant& inv, const MonicInput& f, const Valuation& ord_delta);
Valuation ord_j(const GraphInvariant& inv, const MonicInput& f, CacheStore& cache);

// ord(Delta(a_0..a_{d-1})); +inf iff f is not separable.
Valuation ord_delta(CacheStore& cache, const MonicInput& f);

// Fan-out helper; results indexed like the input, deterministic.
std::vector<GraphInvariant> get_or_compute_all(CacheStore& cache,
                                               const std::vector<WeightedGraph>& graphs,
                                               unsigned threads = 0);

}  // namespace clusterlens

#endif
