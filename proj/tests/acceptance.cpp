// Acceptance runner: one PASS/FAIL line per criterion, with the runtime
// against its budget. Exit status is 0 when every criterion passes except
// those listed in suite::known_defects(), which still print FAIL.

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sys/wait.h>

#include "suite.hpp"

#ifndef ADELEFORGE_CLI
#error "ADELEFORGE_CLI must name the adeleforge binary"
#endif
#ifndef ADELEFORGE_SAMPLES
#error "ADELEFORGE_SAMPLES must name the samples directory"
#endif

using json = nlohmann::json;

namespace {

struct Run {
  int status;
  std::string out;
};

Run shell(const std::string& cmd) {
  Run r{-1, ""};
  FILE* p = popen(cmd.c_str(), "r");
  if (!p) return r;
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof buf, p)) > 0) r.out.append(buf, n);
  int st = pclose(p);
  r.status = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
  return r;
}

std::string cli() { return std::string("\"") + ADELEFORGE_CLI + "\""; }
std::string sample(const std::string& n) { return std::string("\"") + ADELEFORGE_SAMPLES + "/" + n + "\""; }

int failures = 0;

void report(const std::string& id, bool pass, const std::string& what, double secs, double budget) {
  bool in_time = secs < budget;
  bool ok = pass && in_time;
  auto kd = suite::known_defects();
  bool known = std::find(kd.begin(), kd.end(), id) != kd.end();
  if (!ok && !known) ++failures;
  char t[64];
  std::snprintf(t, sizeof t, "%.2f s < %.0f s", secs, budget);
  std::cout << "criterion " << id << ": " << (ok ? "PASS" : "FAIL") << "  " << what << "  [" << t
            << (in_time ? "" : " exceeded") << "]" << (!ok && known ? "  (known defect in the stated instance)" : "")
            << "\n";
}

template <class F>
double timed(F&& f) {
  auto t0 = std::chrono::steady_clock::now();
  f();
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

int main() {
  suite::Config cfg;
  json r;
  double s;

  s = timed([&] { r = suite::product_formula(cfg); });
  report("1", r["pass"], "product formula, " + r["checked"].dump() + " (q, chi) sums, " + r["failures"].dump() +
                             " nonzero (tolerance: exact zero)", s, 30);

  s = timed([&] { r = suite::b1s_criterion(cfg); });
  report("2", r["pass"], "B_{1,S} vs local sampling, " + r["characters"].dump() + " characters, " +
                             r["mismatches"].dump() + " mismatches", s, 30);

  s = timed([&] { r = suite::embedding_soundness(cfg); });
  report("3", r["pass"], "embedding soundness on " + r["divisors"].dump() + " random divisors (exact)", s, 5);

  std::vector<json> four;
  s = timed([&] { four = suite::curve_desk_instance(cfg); });
  report("4a", four[0]["pass"], "integral points " + four[0]["points_B20"].dump() + " at B=20 and " +
                                    four[0]["points_B30"].dump() + " at B=30", s, 60);
  report("4b", four[1]["pass"], "integral points survive all B_{1,S} tuples of conductor <= 50", s, 60);
  std::string diag;
  for (const auto& d : four[2]["diagnostics"])
    diag += "; S=" + d["S"].dump() + " M=" + d["conductor_max"].dump() + " -> " + d["verdict"].get<std::string>() +
            " at conductor " + d["conductor"].dump();
  report("4c", four[2]["pass"], "deviant t_7=3 at S={inf,2}, M=50 -> " + four[2]["verdict"].get<std::string>() + diag,
         s, 60);

  s = timed([&] { r = suite::selmer_presentations(cfg); });
  report("5", r["pass"], "Selmer presentations agree; order for ({inf,2,3},5) = " + r["cases"][0]["order"].dump(), s,
         30);

  s = timed([&] { r = suite::sieve_instance(cfg); });
  report("6", r["pass"], "Z={1,4}: Excluded(N=" + r["excluded"]["N"].dump() + ", v0=" + r["excluded"]["v0"].dump() +
                             "), checker " + r["excluded"]["checker"].dump() + "; Member(" +
                             r["member"]["z"].get<std::string>() + "); h=1 fails at N=" +
                             r["h1_negative_control"]["fails_at"].dump(), s, 10);

  s = timed([&] { r = suite::dilatation_semantics(cfg); });
  report("7", r["pass"], "dilatation scans, " + r["samples"].dump() + " samples, " + r["mismatches"].dump() +
                             " mismatches, " + r["composition_failures"].dump() + " composition failures", s, 20);

  s = timed([&] { r = suite::function_field_suite(cfg); });
  std::string ff;
  for (const auto& b : r["bases"])
    ff += b["base"].get<std::string>() + ": " + b["survived"].dump() + "/" + b["solutions_tested"].dump() +
          " survive, " + b["deviants_obstructed"].dump() + "/" + b["deviants"].dump() + " deviants obstructed; ";
  report("8", r["pass"], ff + "Weil " + r["weil_pairs"].dump() + " pairs, " + r["weil_failures"].dump() + " failures",
         s, 60);

  // 9: through the CLI, then both checkers
  struct Sc {
    std::string data, f, bounds, expect;
  };
  std::vector<Sc> scs{{"hv_member.json", "t", "", "Member"},
                      {"hv_obstructed.json", "t", "conductor_max=63", "Excluded"},
                      {"hv_sieve.json", "t^3", "", "Excluded"}};
  bool ok9 = true;
  std::string kinds;
  s = timed([&] {
    int k = 0;
    for (const auto& sc : scs) {
      std::string cmd = cli() + " hv --curve " + sample("curve_three_point.json") + " --data " + sample(sc.data) +
                        " --s inf,2 --f '" + sc.f + "'" + (sc.bounds.empty() ? "" : " --bounds " + sc.bounds);
      Run out = shell(cmd);
      json v;
      try {
        v = json::parse(out.out);
      } catch (const std::exception&) {
        ok9 = false;
        continue;
      }
      auto chk = afcheck::check(v);
      std::string path = "acceptance_hv_" + std::to_string(k++) + ".json";
      if (FILE* f = std::fopen(path.c_str(), "w")) {
        std::fputs(out.out.c_str(), f);
        std::fclose(f);
      }
      Run vc = shell(cli() + " verify-certificate --cert " + path);
      std::string kind = v.value("kind", "?");
      kinds += (kinds.empty() ? "" : ", ") + kind + " (stage " + v["payload"].value("stage", json(0)).dump() + ")";
      ok9 = ok9 && out.status == 0 && kind == sc.expect && chk.ok && vc.status == 0;
    }
  });
  report("9", ok9, "hv scenarios -> " + kinds + "; certificates verified", s, 60);

  Run a, b;
  s = timed([&] {
    a = shell(cli() + " selftest --seed 7");
    b = shell(cli() + " selftest --seed 7");
  });
  report("10", a.status == 0 && !a.out.empty() && a.out == b.out,
         "selftest --seed 7 twice: " + std::to_string(a.out.size()) + " bytes, " +
             (a.out == b.out ? "identical" : "different"),
         s, 600);

  std::cout << (failures ? "acceptance: FAILED" : "acceptance: all criteria pass except known defects") << "\n";
  return failures ? 1 : 0;
}
