#include <clusterlens/oracle.hpp>
#include <clusterlens/recover.hpp>

#include <CLI11.hpp>

#include <chrono>
#include <cstdlib>
#include <iostream>
#include <random>
#include <sstream>

namespace cl = clusterlens;

namespace {

std::string default_cache_dir(const std::string& flag_value) {
  if (!flag_value.empty()) return flag_value;
  if (const char* env = std::getenv("CLUSTERLENS_CACHE")) {
    if (*env) return env;
  }
  return ".clusterlens-cache";
}

// "c_f;a_{d-1},...,a_0"
std::pair<cl::Rational, std::vector<cl::Rational>> parse_coeffs(const std::string& s) {
  const auto semi = s.find(';');
  if (semi == std::string::npos) {
    throw cl::InputError("--coeffs must look like \"c_f;a_{d-1},...,a_0\"");
  }
  const cl::Rational c_f = cl::rational_from_string(s.substr(0, semi));
  std::vector<cl::Rational> high_to_low;
  std::istringstream is(s.substr(semi + 1));
  std::string tok;
  while (std::getline(is, tok, ',')) {
    const auto b = tok.find_first_not_of(" \t");
    if (b == std::string::npos) throw cl::InputError("empty coefficient");
    const auto e = tok.find_last_not_of(" \t");
    high_to_low.push_back(cl::rational_from_string(tok.substr(b, e - b + 1)));
  }
  if (high_to_low.empty()) throw cl::InputError("no coefficients given");
  std::vector<cl::Rational> low_to_high(high_to_low.rbegin(), high_to_low.rend());
  return {c_f, low_to_high};
}

std::string render_text(const cl::RunResult& result, const cl::MonicInput& f,
                        bool with_trace) {
  std::ostringstream os;
  os << "picture: " << result.picture.ascii() << "\n";
  os << "depths:";
  for (const auto& q : result.profile.depths) os << " " << cl::rational_to_string(q);
  os << "\n";
  os << "pairs-per-depth:";
  for (long long e : result.profile.mult) os << " " << e;
  os << "\n";
  os << "ord(c_f): " << result.ord_cf.to_string() << "\n";
  if (with_trace) {
    for (const auto& rec : result.trace) {
      os << "step " << rec.n << (rec.shortcut ? " (shortcut)" : "") << ":\n";
      for (const auto& c : rec.candidates) {
        os << "  " << cl::to_canonical_string(c.graph) << "  ord(J)=" << c.ord_j.to_string()
           << "  A=" << c.a_value.to_string() << "\n";
      }
      os << "  selected " << cl::to_canonical_string(rec.selected)
         << "  depth=" << rec.depth.to_string() << "\n";
    }
  }
  return os.str();
}

int run_recover(const std::string& prime, const std::string& coeffs, bool as_json,
                bool with_trace, const std::string& cache_dir, bool no_shortcut) {
  const auto ctx = cl::ValuedContext::make(cl::BigInt(prime));
  auto [c_f, a] = parse_coeffs(coeffs);
  const auto f = cl::MonicInput::make(ctx, std::move(a), c_f);
  cl::CacheStore cache(default_cache_dir(cache_dir));
  cl::RunOptions opts;
  opts.use_shortcut = !no_shortcut;
  const auto result = cl::run(f, cache, opts);
  if (as_json) {
    std::cout << cl::to_json(result, f, with_trace);
  } else {
    std::cout << render_text(result, f, with_trace);
  }
  return 0;
}

int run_precompute(int degree, const std::string& cache_dir) {
  cl::CacheStore cache(default_cache_dir(cache_dir));
  const auto graphs = cl::enumerate_auxiliary(degree);
  cache.get_delta(degree);
  const auto invs = cl::get_or_compute_all(cache, graphs);
  std::cout << "precomputed " << invs.size() << " invariants for degree " << degree
            << " into " << cache.dir().string() << "\n";
  return 0;
}

std::uint64_t digest_elem(const cl::ElemPoly& g) {
  std::uint64_t h = cl::splitmix64(static_cast<std::uint64_t>(g.d));
  for (const auto& [e, c] : g.terms) {
    for (int i = 0; i < g.d; ++i) h = cl::splitmix64(h ^ e[i]);
    for (char ch : c.str()) h = cl::splitmix64(h ^ static_cast<std::uint64_t>(ch));
  }
  return h;
}

int run_family(int degree) {
  const auto fam = cl::family(degree);
  std::cout << "t=" << fam.t << "\n";
  for (std::size_t i = 0; i < fam.members.size(); ++i) {
    const auto& g = fam.members[i];
    std::ostringstream os;
    os << std::hex << digest_elem(g);
    std::cout << "member " << (i + 1) << " digest=" << os.str()
              << " terms=" << g.terms.size() << " degree=" << g.weighted_degree() << "\n";
  }
  return 0;
}

int run_oracle_check(int seeds, int degree, const std::string& prime,
                     const std::string& cache_dir) {
  const auto ctx = cl::ValuedContext::make(cl::BigInt(prime));
  cl::CacheStore cache(default_cache_dir(cache_dir));
  int failures = 0;
  for (int s = 1; s <= seeds; ++s) {
    const auto inst = cl::random_split_poly(degree, ctx, static_cast<std::uint64_t>(s));
    const auto expected = cl::cluster_from_valmatrix(inst.m);
    const auto result = cl::run(inst.f, cache);
    const bool ok = result.picture == expected.first && result.profile == expected.second;
    if (!ok) {
      ++failures;
      std::cout << "seed " << s << ": MISMATCH\n  expected " << expected.first.ascii()
                << "\n  got      " << result.picture.ascii() << "\n";
    }
  }
  std::cout << "oracle-check: " << seeds << " seeds, " << (seeds - failures) << " ok, "
            << failures << " failed\n";
  return failures == 0 ? 0 : 3;
}

int run_bench(int count, int degree, const std::string& prime,
              const std::string& cache_dir) {
  const auto ctx = cl::ValuedContext::make(cl::BigInt(prime));
  cl::CacheStore cache(default_cache_dir(cache_dir));
  // warm: all invariants for the degree plus the discriminant
  const auto graphs = cl::enumerate_auxiliary(degree);
  cl::get_or_compute_all(cache, graphs);
  cache.get_delta(degree);

  std::mt19937_64 rng(0x62656e6368ULL);
  std::vector<cl::MonicInput> inputs;
  while (static_cast<int>(inputs.size()) < count) {
    std::vector<cl::Rational> a(degree);
    for (auto& x : a) x = cl::Rational(1 + static_cast<long long>(rng() % 5));
    auto f = cl::MonicInput::make(ctx, std::move(a));
    if (cl::ord_delta(cache, f).is_infinite()) continue;  // skip non-separable
    inputs.push_back(std::move(f));
  }
  const auto start = std::chrono::steady_clock::now();
  for (const auto& f : inputs) {
    const auto result = cl::run(f, cache);
    if (result.profile.depths.empty() && degree > 1) {
      throw cl::InternalError("bench recovery produced no depths");
    }
  }
  const auto stop = std::chrono::steady_clock::now();
  const double secs = std::chrono::duration<double>(stop - start).count();
  std::cout << "bench: " << count << " degree-" << degree << " recoveries in " << secs
            << " s (" << (secs * 1e3 / count) << " ms each, warm cache)\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"cluster picture recovery from polynomial coefficients"};
  app.require_subcommand(1);

  std::string prime, coeffs, cache_dir;
  bool as_json = false, as_ascii = false, with_trace = false, no_shortcut = false;
  int degree = 0, seeds = 0, count = 0;

  auto* rec = app.add_subcommand("recover", "recover the cluster picture of a polynomial");
  rec->add_option("--prime", prime, "residue characteristic p")->required();
  rec->add_option("--coeffs", coeffs, "\"c_f;a_{d-1},...,a_0\" of c_f*(x^d + ... + a_0)")
      ->required();
  rec->add_flag("--json", as_json, "emit JSON");
  rec->add_flag("--ascii", as_ascii, "emit plain text (default)");
  rec->add_flag("--trace", with_trace, "include the per-step candidate trace");
  rec->add_option("--cache", cache_dir, "cache directory (default $CLUSTERLENS_CACHE)");
  rec->add_flag("--no-shortcut", no_shortcut, "always evaluate the final invariant");

  auto* pre = app.add_subcommand("precompute", "materialize all invariants for a degree");
  pre->add_option("--degree", degree, "degree")->required();
  pre->add_option("--cache", cache_dir, "cache directory")->required();

  auto* fam = app.add_subcommand("family", "count and digest the invariant family");
  fam->add_option("--degree", degree, "degree")->required();

  auto* ora = app.add_subcommand("oracle-check", "recovery vs. root-oracle consistency");
  ora->add_option("--seeds", seeds, "number of random instances")->required();
  ora->add_option("--degree", degree, "degree")->required();
  ora->add_option("--prime", prime, "residue characteristic")->required();
  ora->add_option("--cache", cache_dir, "cache directory");

  auto* ben = app.add_subcommand("bench", "time batch recovery with a warm cache");
  ben->add_option("--count", count, "number of polynomials")->required();
  ben->add_option("--degree", degree, "degree")->required();
  ben->add_option("--prime", prime, "residue characteristic")->required();
  ben->add_option("--cache", cache_dir, "cache directory");

  CLI11_PARSE(app, argc, argv);

  try {
    if (rec->parsed()) {
      return run_recover(prime, coeffs, as_json && !as_ascii, with_trace, cache_dir,
                         no_shortcut);
    }
    if (pre->parsed()) return run_precompute(degree, cache_dir);
    if (fam->parsed()) return run_family(degree);
    if (ora->parsed()) return run_oracle_check(seeds, degree, prime, cache_dir);
    if (ben->parsed()) return run_bench(count, degree, prime, cache_dir);
  } catch (const cl::InputError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 1;
  } catch (const cl::ResourceError& e) {
    std::cerr << "resource limit: " << e.what() << "\n";
    return 2;
  } catch (const cl::InternalError& e) {
    std::cerr << "internal invariant violation: " << e.what() << "\n";
    return 3;
  } catch (const cl::CacheIoError& e) {
    std::cerr << "cache I/O error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
