#include <clusterlens/evaluator.hpp>

#include <json.hpp>

#include <atomic>
#include <fstream>
#include <sstream>
#include <thread>

namespace clusterlens {

using nlohmann::json;

MonicInput MonicInput::make(const ValuedContext& ctx, std::vector<Rational> a_low_to_high,
                            const Rational& c_f) {
  if (a_low_to_high.empty()) throw InputError("degree must be at least 1");
  if (a_low_to_high.size() > static_cast<std::size_t>(kMaxVertices)) {
    throw ResourceError("degree above supported maximum");
  }
  if (c_f == 0) throw InputError("leading coefficient is zero");
  MonicInput f;
  f.ctx = ctx;
  f.d = static_cast<int>(a_low_to_high.size());
  f.a = std::move(a_low_to_high);
  f.ord_cf = ord_p(c_f, ctx);
  return f;
}

CacheStore::CacheStore(std::filesystem::path dir) : dir_(std::move(dir)) {
  if (!dir_.empty()) {
    std::error_code ec;
    std::filesystem::create_directories(dir_, ec);
    if (ec) throw CacheIoError("cannot create cache dir " + dir_.string());
  }
}

namespace {

std::string sanitize(const std::string& canon) {
  std::string out;
  out.reserve(canon.size());
  for (char c : canon) {
    if (c == ';' || c == ',') {
      out += '_';
    } else if (c == ':') {
      out += '.';
    } else if (c == ' ') {
      // skip
    } else {
      out += c;
    }
  }
  return out;
}

void atomic_write(const std::filesystem::path& path, const std::string& bytes) {
  static std::atomic<unsigned> counter{0};
  const auto tmp = path.parent_path() /
                   (path.filename().string() + ".tmp." + std::to_string(counter++));
  {
    std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
    if (!os) throw CacheIoError("cannot open " + tmp.string());
    os << bytes;
    if (!os.flush()) throw CacheIoError("write failed for " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw CacheIoError("rename failed for " + path.string());
  }
}

json elem_to_json(const ElemPoly& g) {
  json terms = json::array();
  for (const auto& [e, c] : g.terms) {
    json exps = json::array();
    for (int i = 0; i < g.d; ++i) exps.push_back(static_cast<int>(e[i]));
    terms.push_back(json::array({exps, c.str()}));
  }
  return terms;
}

ElemPoly elem_from_json(const json& terms, int d) {
  ElemPoly g;
  g.d = d;
  for (const auto& entry : terms) {
    ExpVecA e{};
    const auto& exps = entry.at(0);
    if (static_cast<int>(exps.size()) != d) throw CacheIoError("bad exponent arity");
    for (int i = 0; i < d; ++i) e[i] = exps.at(i).get<std::uint16_t>();
    g.terms.emplace(e, BigInt(entry.at(1).get<std::string>()));
  }
  return g;
}

}  // namespace

std::string serialize_invariant(const GraphInvariant& inv) {
  json j;
  j["format_version"] = CacheStore::kFormatVersion;
  j["d"] = inv.graph.d();
  j["graph"] = to_canonical_string(inv.graph);
  j["k"] = inv.k;
  j["num_degree"] = inv.num_degree;
  j["g"] = elem_to_json(inv.g);
  return j.dump() + "\n";
}

GraphInvariant parse_invariant(const std::string& text) {
  json j = json::parse(text);
  if (j.at("format_version").get<int>() != CacheStore::kFormatVersion) {
    throw CacheIoError("format version mismatch");
  }
  const int d = j.at("d").get<int>();
  GraphInvariant inv;
  inv.graph = graph_from_string(j.at("graph").get<std::string>());
  if (inv.graph.d() != d) throw CacheIoError("inconsistent record");
  inv.key = canonical_form(inv.graph);
  inv.k = j.at("k").get<int>();
  inv.num_degree = j.at("num_degree").get<int>();
  inv.g = elem_from_json(j.at("g"), d);
  return inv;
}

std::optional<GraphInvariant> CacheStore::load_from_disk(const std::string& canon, int d) {
  if (dir_.empty()) return std::nullopt;
  const auto path = dir_ / ("inv_" + sanitize(canon) + ".json");
  std::ifstream is(path, std::ios::binary);
  if (!is) return std::nullopt;
  std::stringstream buf;
  buf << is.rdbuf();
  try {
    GraphInvariant inv = parse_invariant(buf.str());
    if (to_canonical_string(inv.graph) != canon || inv.graph.d() != d) {
      return std::nullopt;
    }
    return inv;
  } catch (const std::exception&) {
    return std::nullopt;  // stale or corrupt record: recompute
  }
}

void CacheStore::persist(const GraphInvariant& inv, const std::string& canon) {
  if (dir_.empty()) return;
  atomic_write(dir_ / ("inv_" + sanitize(canon) + ".json"), serialize_invariant(inv));
}

GraphInvariant CacheStore::load_or_compute(const WeightedGraph& g, const std::string& canon) {
  if (auto loaded = load_from_disk(canon, g.d())) {
    std::lock_guard<std::mutex> lock(mu_);
    ++stats_.disk_loads;
    return *loaded;
  }
  GraphInvariant inv = compute_graph_invariant(g);
  {
    std::lock_guard<std::mutex> lock(mu_);
    ++stats_.computes;
  }
  persist(inv, canon);
  return inv;
}

GraphInvariant CacheStore::get_or_compute(const WeightedGraph& g) {
  const std::string canon = to_canonical_string(g);
  std::shared_future<GraphInvariant> fut;
  bool owner = false;
  std::promise<GraphInvariant> promise;
  {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = inflight_.find(canon);
    if (it != inflight_.end()) {
      ++stats_.memory_hits;
      fut = it->second;
    } else {
      fut = promise.get_future().share();
      inflight_.emplace(canon, fut);
      owner = true;
    }
  }
  if (owner) {
    try {
      promise.set_value(load_or_compute(g, canon));
    } catch (...) {
      promise.set_exception(std::current_exception());
    }
  }
  return fut.get();
}

ElemPoly CacheStore::get_delta(int d) {
  {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = deltas_.find(d);
    if (it != deltas_.end()) return it->second;
  }
  ElemPoly delta;
  bool loaded = false;
  if (!dir_.empty()) {
    const auto path = dir_ / ("delta_d" + std::to_string(d) + ".json");
    std::ifstream is(path, std::ios::binary);
    if (is) {
      std::stringstream buf;
      buf << is.rdbuf();
      try {
        json j = json::parse(buf.str());
        if (j.at("format_version").get<int>() == kFormatVersion &&
            j.at("d").get<int>() == d) {
          delta = elem_from_json(j.at("g"), d);
          loaded = true;
        }
      } catch (const std::exception&) {
        loaded = false;
      }
    }
  }
  if (!loaded) {
    delta = delta_elem(d);
    if (!dir_.empty()) {
      json j;
      j["format_version"] = kFormatVersion;
      j["d"] = d;
      j["graph"] = "delta";
      j["k"] = 0;
      j["num_degree"] = d * (d - 1);
      j["g"] = elem_to_json(delta);
      atomic_write(dir_ / ("delta_d" + std::to_string(d) + ".json"), j.dump() + "\n");
    }
  }
  std::lock_guard<std::mutex> lock(mu_);
  deltas_.emplace(d, delta);
  return delta;
}

CacheStore::Stats CacheStore::stats() const {
  std::lock_guard<std::mutex> lock(mu_);
  return stats_;
}

Valuation ord_j(const GraphInvariant& inv, const MonicInput& f, const Valuation& ord_delta) {
  if (inv.graph.d() != f.d) throw InternalError("ord_j: degree mismatch");
  const Rational value = inv.g.evaluate(f.a);
  const Valuation vg = ord_p(value, f.ctx);
  if (vg.is_infinite()) return Valuation::infinity();
  if (inv.k == 0) return vg;
  if (ord_delta.is_infinite()) {
    throw InputError("polynomial is not separable (Delta(a) = 0)");
  }
  return Valuation::of(vg.value() - static_cast<long long>(inv.k) * ord_delta.value());
}

Valuation ord_j(const GraphInvariant& inv, const MonicInput& f, CacheStore& cache) {
  return ord_j(inv, f, ord_delta(cache, f));
}

Valuation ord_delta(CacheStore& cache, const MonicInput& f) {
  if (f.d == 1) return Valuation::of(0);  // empty product
  const ElemPoly delta = cache.get_delta(f.d);
  return ord_p(delta.evaluate(f.a), f.ctx);
}

std::vector<GraphInvariant> get_or_compute_all(CacheStore& cache,
                                               const std::vector<WeightedGraph>& graphs,
                                               unsigned threads) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min<unsigned>(threads, graphs.size());
  std::vector<std::optional<GraphInvariant>> slots(graphs.size());
  if (threads <= 1) {
    for (std::size_t i = 0; i < graphs.size(); ++i) {
      slots[i] = cache.get_or_compute(graphs[i]);
    }
  } else {
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mu;
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) {
      pool.emplace_back([&] {
        while (true) {
          const std::size_t i = next.fetch_add(1);
          if (i >= graphs.size()) return;
          try {
            slots[i] = cache.get_or_compute(graphs[i]);
          } catch (...) {
            std::lock_guard<std::mutex> lock(error_mu);
            if (!error) error = std::current_exception();
            return;
          }
        }
      });
    }
    for (auto& th : pool) th.join();
    if (error) std::rethrow_exception(error);
  }
  std::vector<GraphInvariant> out;
  out.reserve(graphs.size());
  for (auto& s : slots) {
    if (!s) throw InternalError("invariant computation dropped a slot");
    out.push_back(std::move(*s));
  }
  return out;
}

}  // namespace clusterlens
