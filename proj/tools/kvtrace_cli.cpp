#include "kvtrace/expr.hpp"
#include "kvtrace/kvdiv.hpp"
#include "kvtrace/rewrite.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <functional>
#include <future>
#include <iostream>
#include <iterator>
#include <random>
#include <sstream>

using namespace kvtrace;
using json = nlohmann::ordered_json;

namespace {

constexpr int kExitPass = 0, kExitFail = 1, kExitUsage = 2, kExitInternal = 3;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Options {
  int g = 2, n = 0, N = 6;
  int degree = -1, max_degree = -1, jobs = 1;
  std::string format = "text", model = "free";
  bool timing = false;
  std::vector<std::string> args;
};

struct Check {
  std::string name;
  bool pass = true;
  std::string expected, computed, provenance;
};

struct Report {
  explicit Report(std::string name = "") : suite(std::move(name)) {}

  std::string suite;
  std::vector<Check> checks;
  bool probe = false;  // conjecture probes report but never fail the run
  json result = json::object();
  std::vector<std::string> text;  // plain output for compute commands
  bool passed() const {
    if (probe) return true;
    for (const auto& c : checks)
      if (!c.pass) return false;
    return true;
  }
};

using Task = std::function<std::vector<Check>()>;

// Runs tasks on up to `jobs` threads; checks come back in task order.
std::vector<Check> run_tasks(const std::vector<Task>& tasks, int jobs) {
  std::vector<std::vector<Check>> parts(tasks.size());
  if (jobs <= 1) {
    for (std::size_t i = 0; i < tasks.size(); ++i) parts[i] = tasks[i]();
  } else {
    std::size_t next = 0;
    while (next < tasks.size()) {
      std::vector<std::future<std::vector<Check>>> batch;
      const std::size_t start = next;
      for (; next < tasks.size() && next - start < static_cast<std::size_t>(jobs); ++next)
        batch.push_back(std::async(std::launch::async, tasks[next]));
      for (std::size_t i = 0; i < batch.size(); ++i) parts[start + i] = batch[i].get();
    }
  }
  std::vector<Check> out;
  for (auto& p : parts) std::move(p.begin(), p.end(), std::back_inserter(out));
  return out;
}

std::string str(const Irregularity& i) { return i.infinite ? "+inf" : std::to_string(i.value); }

std::string dims(std::size_t a) { return "dim " + std::to_string(a); }

Check equal_subspaces(const std::string& name, const Subspace& computed, const Subspace& expected,
                      const std::string& expected_label, const std::string& prov) {
  return {name, computed == expected, expected_label + " (" + dims(expected.dim()) + ")", dims(computed.dim()), prov};
}

std::string read_element(const Options& o) {
  if (!o.args.empty()) return o.args.front();
  std::string s((std::istreambuf_iterator<char>(std::cin)), std::istreambuf_iterator<char>());
  if (s.find_first_not_of(" \t\r\n") == std::string::npos) throw UsageError("missing element expression");
  return s;
}

void require_closed(const Options& o, const std::string& what) {
  if (o.n != 0) throw UsageError(what + " is only defined for closed surfaces (n = 0)");
  if (o.g < 1) throw UsageError("genus must be >= 1");
}

int require_degree(const Options& o) {
  if (o.degree < 0) throw UsageError("--degree is required");
  return o.degree;
}

Model parse_model(const std::string& s) {
  if (s == "free") return Model::Free;
  if (s == "omega") return Model::Omega;
  throw UsageError("unknown model: " + s);
}

TracePolynomial model_element(int g, int d, Model m, const SparseVector& v) {
  return m == Model::Free ? necklace_index({g, 0}, d).element(v) : quotient_model(g, d).section(v);
}

// ---------------------------------------------------------------------------
// Compute commands.

Report cmd_irr(const Options& o) {
  const std::string src = read_element(o);
  const TracePolynomial t = parse_trace(src, o.g, o.n);
  const Irregularity irr = irregularity(t, o.g);
  Report r{"irr"};
  r.result["input"] = to_string(t);
  if (irr.infinite) r.result["irr"] = "+inf";
  else r.result["irr"] = irr.value;
  r.text = {str(irr)};
  return r;
}

Report cmd_normal_form(const Options& o) {
  require_closed(o, "normal-form");
  const TracePolynomial t = parse_trace(read_element(o), o.g, o.n);
  const TracePolynomial nf = normal_form(t, o.g);
  Report r{"normal-form"};
  r.result["input"] = to_string(t);
  r.result["normal_form"] = to_string(nf);
  r.result["terms"] = nf.size();
  r.text = {to_string(nf)};
  return r;
}

Report cmd_basis(const Options& o) {
  require_closed(o, "basis");
  const int d = require_degree(o);
  const auto basis = basis_XY(o.g, d);
  Report r{"basis"};
  r.result["degree"] = d;
  r.result["dim"] = basis.size();
  json words = json::array();
  for (const auto& c : basis) {
    words.push_back(to_string(c));
    r.text.push_back(to_string(c));
  }
  r.result["basis"] = words;
  return r;
}

Report cmd_kernel(const Options& o) {
  require_closed(o, "kernel");
  const int d = require_degree(o);
  if (d < 1) throw UsageError("--degree must be >= 1");
  const Model m = parse_model(o.model);
  const auto rep = kernel_reduced_coproduct(o.g, d, m);
  Report r{"kernel"};
  r.result["degree"] = d;
  r.result["model"] = to_string(m);
  r.result["dim"] = rep.dim();
  r.result["ambient_dim"] = rep.ambient_dim;
  json basis = json::array();
  r.text.push_back("dim " + std::to_string(rep.dim()) + " of " + std::to_string(rep.ambient_dim));
  for (const auto& v : rep.kernel.basis()) {
    const std::string s = to_string(model_element(o.g, d, m, v));
    basis.push_back(s);
    r.text.push_back(s);
  }
  r.result["basis"] = basis;
  return r;
}

Report cmd_holonomy(const Options& o) {
  require_closed(o, "holonomy");
  if (o.g < 2) throw UsageError("holonomy needs genus >= 2");
  if (o.args.size() != 2) throw UsageError("holonomy expects two arguments: s t");
  int s = 0, t = 0;
  try {
    s = std::stoi(o.args[0]);
    t = std::stoi(o.args[1]);
  } catch (const std::exception&) {
    throw UsageError("holonomy arguments must be integers");
  }
  if (s < 1 || t < 1) throw UsageError("holonomy needs s, t >= 1");
  const auto h = holonomy_data(s, t, o.g);
  const TracePolynomial loop = bead_loop_holonomy(BeadConfig::base(s, t), standard_loop(s, t), o.g);
  const TracePolynomial expected = Scalar(t) * trace_project(h.r_prime * symplectic_sum(o.g - 1));
  Report r{"holonomy"};
  r.checks.push_back({"loop holonomy = t|r' w'|", loop == expected, to_string(expected), to_string(loop), "PAPER"});
  r.result["s"] = s;
  r.result["t"] = t;
  r.result["r"] = h.r.to_string();
  r.result["r_prime"] = h.r_prime.to_string();
  r.result["b"] = h.b.to_string();
  r.result["holonomy"] = to_string(loop);
  r.text = {"r  = " + h.r.to_string(), "r' = " + h.r_prime.to_string(), "b  = " + h.b.to_string(),
            "h  = " + to_string(loop)};
  return r;
}

std::vector<Check> closed_checks(int g, int k, int N) {
  const auto c = krv_closed_comparison(g, k, N);
  const Subspace z = ideal_valued_derivations(g, k);
  const std::string tag = " (k=" + std::to_string(k) + ")";
  return {
      {"krv members = cobracket-preserving" + tag, c.agree(), dims(c.equivariant.dim()), dims(c.members.dim()), "DERIVED"},
      {"ideal-valued derivations are members" + tag, contains_subspace(c.members, z), "contains " + dims(z.dim()),
       contains_subspace(c.members, z) ? "contained" : "not contained", "TRIVIAL"},
  };
}

Report cmd_krv_check(const Options& o) {
  require_closed(o, "krv-check");
  const int k = require_degree(o);
  if (k < 1) throw UsageError("--degree must be >= 1");
  Report r{"krv-check"};
  r.checks = closed_checks(o.g, k, o.N);
  const auto c = krv_closed_comparison(o.g, k, o.N);
  r.result["degree"] = k;
  r.result["w_dim"] = c.w_dim;
  r.result["members_dim"] = c.members.dim();
  r.result["equivariant_dim"] = c.equivariant.dim();
  return r;
}

// ---------------------------------------------------------------------------
// Verification suites.

Report suite_rewrite(const Options& o) {
  require_closed(o, "rewrite");
  const int g = o.g;
  if (g < 2) throw UsageError("rewrite suite needs genus >= 2");
  Report r{"rewrite"};
  const struct {
    Word w;
    std::string expected;
  } examples[] = {
      {{}, "0"},
      {{y(g), x(g), x(1)}, "1"},
      {{y(g), x(g), x(g), y(g), x(g), y(1)}, "4"},
      {{y(g), x(g), x(g)}, "+inf"},
      {{y(g)}, "0"},
  };
  for (const auto& e : examples) {
    const std::string c = str(irregularity(e.w, g));
    r.checks.push_back({"irr " + to_string(CyclicWord(e.w)), c == e.expected, e.expected, c, "PAPER"});
  }
  const int max_len = o.max_degree > 0 ? o.max_degree : 8;
  std::size_t words = 0, mismatches = 0;
  for (int len = 0; len <= max_len; ++len)
    for (const auto& w : words_of_weight({g, 0}, len)) {
      ++words;
      const Irregularity p = irregularity_by_procedure(w, g);
      if (p.infinite != irregularity_is_infinite(w, g) || p != irregularity(w, g)) ++mismatches;
    }
  r.checks.push_back({"irr finiteness = predicate, length <= " + std::to_string(max_len), mismatches == 0,
                      "0 mismatches", std::to_string(mismatches) + " mismatches in " + std::to_string(words), "DERIVED"});

  std::mt19937_64 rng(7);
  std::size_t tried = 0, bad_decrease = 0, bad_confluence = 0;
  while (tried < 100) {
    TracePolynomial t;
    const int d = 2 + static_cast<int>(rng() % 6);
    const auto alpha = Ambient{g, 0}.alphabet();
    for (int term = 0; term < 3; ++term) {
      Word w;
      for (int i = 0; i < d; ++i) w.push_back(alpha[rng() % alpha.size()]);
      if (!irregularity_is_infinite(w, g)) t.add_term(CyclicWord(w), Scalar(1 + static_cast<int>(rng() % 5)));
    }
    if (t.is_zero()) continue;
    ++tried;
    const TracePolynomial nf = rho_normalize(t, g);
    for (int run = 0; run < 2; ++run) {
      const auto tr = rho_normalize_random(t, g, rng);
      bad_decrease += !tr.decreasing;
      bad_confluence += !(tr.result == nf);
    }
  }
  r.checks.push_back({"rho steps decrease irr", bad_decrease == 0, "0 failures", std::to_string(bad_decrease) + " failures",
                      "PAPER"});
  r.checks.push_back({"random strategies converge", bad_confluence == 0, "0 failures",
                      std::to_string(bad_confluence) + " failures", "PAPER"});
  return r;
}

Report suite_basis(const Options& o) {
  require_closed(o, "basis");
  const int top = o.max_degree >= 0 ? o.max_degree : 6;
  Report r{"basis"};
  std::vector<Task> tasks;
  for (int d = 0; d <= top; ++d)
    tasks.push_back([g = o.g, d] {
      const auto basis = basis_XY(g, d);
      const auto& m = quotient_model(g, d);
      Subspace img(m.dim());
      for (const auto& c : basis) img.insert(m.project(TracePolynomial(c)));
      const std::string tag = " (d=" + std::to_string(d) + ")";
      return std::vector<Check>{
          {"#basis_XY = dim quotient" + tag, basis.size() == m.dim(), std::to_string(m.dim()),
           std::to_string(basis.size()), "DERIVED"},
          {"basis_XY independent in quotient" + tag, img.dim() == basis.size(), dims(basis.size()), dims(img.dim()),
           "DERIVED"},
      };
    });
  r.checks = run_tasks(tasks, o.jobs);
  return r;
}

Report suite_kernels(const Options& o) {
  require_closed(o, "kernels");
  const int g = o.g;
  Report r{"kernels"};
  std::vector<Task> tasks;
  tasks.push_back([g] {
    std::vector<Check> out;
    const Canonical expected[] = {Canonical::Wedge, Canonical::Wedge, Canonical::Wedge, Canonical::HTimesL};
    const char* labels[] = {"H", "0", "wedge^3 H", "|HL^(3)|"};
    for (int d = 1; d <= 4; ++d) {
      const auto k = kernel_reduced_coproduct(g, d, Model::Free);
      const Subspace e = d == 2 ? Subspace(k.ambient_dim) : canonical_subspace(g, d, expected[d - 1], Model::Free);
      out.push_back(equal_subspaces("Ker |Delta-bar| free (d=" + std::to_string(d) + ")", k.kernel, e, labels[d - 1], "PAPER"));
    }
    if (g == 2) {
      const auto k = kernel_reduced_coproduct(2, 3, Model::Free);
      out.push_back({"dim Ker free (g=2, d=3)", k.dim() == 4, "4", std::to_string(k.dim()), "PAPER"});
    }
    return out;
  });
  tasks.push_back([g] {
    std::vector<Check> out;
    const auto k3 = kernel_reduced_coproduct(g, 3, Model::Omega);
    out.push_back(equal_subspaces("Ker |Delta-bar_w| (d=3)", k3.kernel, canonical_subspace(g, 3, Canonical::HTimesL, Model::Omega),
                                  "|HL^(2)|", "PAPER"));
    const auto k4 = kernel_reduced_coproduct(g, 4, Model::Omega);
    const Subspace hl = canonical_subspace(g, 4, Canonical::HTimesL, Model::Omega);
    out.push_back({"Ker |Delta-bar_w| contains |HL^(3)| (d=4)", contains_subspace(k4.kernel, hl), "contains " + dims(hl.dim()),
                   dims(k4.dim()), "PAPER"});
    const bool strict = k4.dim() > hl.dim();
    out.push_back({"inclusion strict iff g = 2 (d=4)", strict == (g == 2), g == 2 ? "strict" : "equal",
                   strict ? "strict" : "equal", "PAPER"});
    return out;
  });
  r.checks = run_tasks(tasks, o.jobs);
  return r;
}

Report suite_deg5(const Options& o) {
  require_closed(o, "deg5-conjecture");
  const int g = o.g;
  Report r{"deg5-conjecture"};
  r.probe = true;
  const auto k = kernel_reduced_coproduct(g, 5, Model::Free);
  Subspace e = canonical_subspace(g, 5, Canonical::HTimesL, Model::Free);
  for (const auto& v : canonical_subspace(g, 5, Canonical::Wedge, Model::Free).basis()) e.insert(v);
  r.checks.push_back(equal_subspaces("Ker |Delta-bar| free (d=5)", k.kernel, e, "|HL^(4)| + wedge^5 H", "PAPER"));
  return r;
}

Report suite_surjectivity(const Options& o) {
  require_closed(o, "surjectivity-conjecture");
  const int top = o.max_degree >= 1 ? o.max_degree : 5;
  Report r{"surjectivity-conjecture"};
  r.probe = true;
  std::vector<Task> tasks;
  for (int d = 1; d <= top; ++d)
    tasks.push_back([g = o.g, d] {
      const auto s = surjectivity_probe(g, d);
      const bool predicted = !(g == 2 && d == 4);
      const std::string computed = "image " + dims(s.image_dim) + " of " + dims(s.omega_kernel_dim) + " (free " +
                                   dims(s.free_kernel_dim) + ")";
      return std::vector<Check>{{"Ker free -> Ker omega surjective (d=" + std::to_string(d) + ")",
                                 s.surjective() == predicted, predicted ? "surjective" : "not surjective", computed,
                                 "PAPER"}};
    });
  r.checks = run_tasks(tasks, o.jobs);
  return r;
}

Report suite_kv(const Options& o) {
  const Ambient amb{o.g, o.n};
  const int N = o.N;
  Report r{"kv"};
  const auto rs = r_series(4);
  const std::string rstr = rs[1].get_str() + ", " + rs[2].get_str() + ", " + rs[3].get_str() + ", " + rs[4].get_str();
  r.checks.push_back({"r(s) = log((e^s-1)/s) coefficients", rstr == "1/2, 1/24, 0, -1/2880", "1/2, 1/24, 0, -1/2880",
                      rstr, "DERIVED"});
  const auto se = special_elements(amb, FramingData::zero(amb), N);
  bool lie = true;
  for (int d = 2; d <= N; ++d) lie = lie && is_lie(se.xi.homogeneous_part(d));
  r.checks.push_back({"xi = omega + higher Lie terms", se.xi.homogeneous_part(2) == omega_family(amb).omega &&
                                                            se.xi.homogeneous_part(1).is_zero() && lie,
                      "omega leading, Lie", lie ? "omega leading, Lie" : "not Lie", "PAPER"});

  std::mt19937_64 rng(11);
  auto random_derivation = [&](int k) {
    Derivation u;
    for (auto l : amb.alphabet()) {
      Polynomial p;
      for (const auto& e : lyndon_lie_basis(amb, k + weight(l)))
        if (rng() % 3 == 0) p += Scalar(1 + static_cast<int>(rng() % 3)) * e.poly;
      u.set(l, p);
    }
    return u;
  };
  std::size_t failures = 0;
  for (int trial = 0; trial < 10; ++trial) {
    const Derivation u = random_derivation(1), v = random_derivation(1 + trial % 2);
    const TracePolynomial lhs = sdiv(commutator(u, v), amb);
    const TracePolynomial rhs = apply(u, sdiv(v, amb)) - apply(v, sdiv(u, amb));
    failures += !(lhs == rhs);
  }
  r.checks.push_back({"sdiv is a Lie cocycle", failures == 0, "0 failures", std::to_string(failures) + " failures",
                      "TRIVIAL"});
  const auto zero = TangentialDerivation::make(amb, Derivation(), {});
  r.checks.push_back({"0 in krv^fr", krv_fr_membership(zero, FramingData::zero(amb), N).member, "member",
                      krv_fr_membership(zero, FramingData::zero(amb), N).member ? "member" : "not member", "TRIVIAL"});
  r.checks.push_back({"0 in kv^fr", kv_fr_membership(zero, FramingData::zero(amb), N).member, "member",
                      kv_fr_membership(zero, FramingData::zero(amb), N).member ? "member" : "not member", "TRIVIAL"});
  return r;
}

Report suite_closed(const Options& o) {
  require_closed(o, "closed");
  const int top = o.max_degree >= 1 ? o.max_degree : 2;
  Report r{"closed"};
  std::vector<Task> tasks;
  for (int k = 1; k <= top; ++k) tasks.push_back([g = o.g, k, N = o.N] { return closed_checks(g, k, N); });
  r.checks = run_tasks(tasks, o.jobs);
  return r;
}

Report cmd_verify(const std::string& suite, const Options& o) {
  static const std::map<std::string, std::function<Report(const Options&)>> suites = {
      {"rewrite", suite_rewrite},
      {"basis", suite_basis},
      {"kernels", suite_kernels},
      {"deg5-conjecture", suite_deg5},
      {"surjectivity-conjecture", suite_surjectivity},
      {"kv", suite_kv},
      {"closed", suite_closed},
  };
  auto it = suites.find(suite);
  if (it == suites.end()) throw UsageError("unknown suite: " + suite);
  return it->second(o);
}

// ---------------------------------------------------------------------------
// Output.

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
  return q + "\"";
}

std::string scalar_text(const json& v) { return v.is_string() ? v.get<std::string>() : v.dump(); }

void emit(const Report& r, const Options& o, double seconds) {
  if (o.format == "json") {
    json j;
    j["suite"] = r.suite;
    j["context"] = {{"g", o.g}, {"n", o.n}, {"N", o.N}};
    json checks = json::array();
    for (const auto& c : r.checks)
      checks.push_back({{"name", c.name}, {"pass", c.pass}, {"expected", c.expected}, {"computed", c.computed},
                        {"provenance", c.provenance}});
    j["checks"] = checks;
    for (const auto& [k, v] : r.result.items()) j[k] = v;
    if (o.timing) j["wall_time_s"] = seconds;
    std::cout << j.dump(2) << "\n";
    return;
  }
  if (o.format == "csv") {
    if (!r.checks.empty()) {
      std::cout << "name,pass,expected,computed,provenance\n";
      for (const auto& c : r.checks)
        std::cout << csv_field(c.name) << "," << (c.pass ? "true" : "false") << "," << csv_field(c.expected) << ","
                  << csv_field(c.computed) << "," << c.provenance << "\n";
    }
    if (!r.result.empty()) {
      std::cout << "key,value\n";
      for (const auto& [k, v] : r.result.items()) {
        if (v.is_array()) {
          for (const auto& e : v) std::cout << csv_field(k) << "," << csv_field(scalar_text(e)) << "\n";
        } else {
          std::cout << csv_field(k) << "," << csv_field(scalar_text(v)) << "\n";
        }
      }
    }
    if (o.timing) std::cout << "wall_time_s," << seconds << "\n";
    return;
  }
  for (const auto& line : r.text) std::cout << line << "\n";
  for (const auto& c : r.checks)
    std::cout << (c.pass ? "PASS " : "FAIL ") << c.name << ": " << c.computed << " [expected " << c.expected << "; "
              << c.provenance << "]\n";
  if (!r.checks.empty()) {
    std::size_t passed = 0;
    for (const auto& c : r.checks) passed += c.pass;
    std::cout << r.suite << ": " << passed << "/" << r.checks.size() << " checks pass" << (r.probe ? " (probe)" : "")
              << "\n";
  }
  if (o.timing) std::cout << "wall time " << seconds << " s\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact computations with cyclic words in T(H) and T(H)_w"};
  app.require_subcommand(1);
  app.fallthrough();
  Options o;
  app.add_option("-g,--genus", o.g, "genus g")->check(CLI::Range(1, 255));
  app.add_option("-n,--boundary", o.n, "number of boundary generators z_j")->check(CLI::Range(0, 255));
  app.add_option("-d,--degree", o.degree, "weight");
  app.add_option("-N,--truncate", o.N, "truncation weight")->check(CLI::Range(2, 64));
  app.add_option("--max-degree", o.max_degree, "largest weight a suite scans");
  app.add_option("--format", o.format, "output format")->check(CLI::IsMember({"json", "csv", "text"}));
  app.add_option("--jobs", o.jobs, "parallel degree jobs")->check(CLI::Range(1, 256));
  app.add_option("--model", o.model, "free or omega")->check(CLI::IsMember({"free", "omega"}));
  app.add_flag("--timing", o.timing, "report wall time");

  std::string suite;
  std::map<std::string, std::function<Report()>> commands;
  auto add = [&](const std::string& name, const std::string& help, std::function<Report()> f) {
    auto* sub = app.add_subcommand(name, help);
    commands[name] = std::move(f);
    return sub;
  };
  add("irr", "irregularity of an element", [&] { return cmd_irr(o); })->add_option("element", o.args);
  add("normal-form", "normal form in the X u Y basis", [&] { return cmd_normal_form(o); })->add_option("element", o.args);
  add("basis", "the X u Y basis in one weight", [&] { return cmd_basis(o); });
  add("kernel", "kernel of the reduced coproduct", [&] { return cmd_kernel(o); });
  add("holonomy", "holonomy of the standard bead loop", [&] { return cmd_holonomy(o); })->add_option("s_t", o.args, "s and t")->expected(2);
  add("krv-check", "krv test against cobracket preservation", [&] { return cmd_krv_check(o); });
  add("verify", "run a verification suite", [&] { return cmd_verify(suite, o); })
      ->add_option("suite", suite, "suite name")
      ->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    const auto start = std::chrono::steady_clock::now();
    Report r;
    for (auto* sub : app.get_subcommands()) r = commands.at(sub->get_name())();
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    emit(r, o, seconds);
    return r.passed() ? kExitPass : kExitFail;
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const SyntaxError& e) {
    std::cerr << e.what() << "\n";
    return kExitUsage;
  } catch (const UnknownGenerator& e) {
    std::cerr << e.what() << "\n";
    return kExitUsage;
  } catch (const TypeError& e) {
    std::cerr << "type error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kExitInternal;
  }
}
