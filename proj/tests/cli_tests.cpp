// End-to-end checks of the command-line driver: exit codes, file outputs,
// config handling, and run-to-run determinism. Invoked with the binary path
// as argv[1]; exits nonzero on the first failed check.
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;

namespace {

int g_failures = 0;

void check(bool ok, const std::string& what) {
  std::printf("%s  %s\n", ok ? "[ok]  " : "[FAIL]", what.c_str());
  if (!ok) ++g_failures;
}

int run(const std::string& cmd) {
  const int st = std::system(cmd.c_str());
#if defined(_WIN32)
  return st;
#else
  return st < 0 ? st : WEXITSTATUS(st);
#endif
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 2) {
    std::fprintf(stderr, "usage: cli_tests <path-to-wgns-binary>\n");
    return 2;
  }
  const std::string bin = fs::absolute(argv[1]).string();
  const fs::path work = fs::temp_directory_path() / "wgns_cli_tests";
  fs::remove_all(work);
  fs::create_directories(work / "a");
  fs::create_directories(work / "b");
  const std::string quiet = " > " + (work / "stdout.txt").string() + " 2> " +
                            (work / "stderr.txt").string();

  // --- argument validation -------------------------------------------------
  check(run(bin + quiet) == 2, "no subcommand exits 2");
  check(run(bin + " convergence --family moebius --levels 1" + quiet) == 2,
        "unknown mesh family exits 2");
  check(run(bin + " convergence -k 7 --levels 1" + quiet) == 2, "k out of range exits 2");
  check(run(bin + " solve --tol -1 --levels 1" + quiet) == 2, "negative tolerance exits 2");
  check(run(bin + " --help" + quiet) == 0, "--help exits 0");

  // --- convergence run, single level --------------------------------------
  const std::string out_a = (work / "a").string();
  const std::string convcmd = " convergence --family triangular -k 0 --levels 1 --format csv "
                              "--format md --out ";
  check(run(bin + convcmd + out_a + quiet) == 0, "one-level convergence run exits 0");
  const fs::path csv_a = work / "a" / "convergence_triangular_k0.csv";
  check(fs::exists(csv_a), "csv report written");
  check(fs::exists(work / "a" / "convergence_triangular_k0.md"), "markdown report written");
  check(fs::exists(work / "a" / "plot_convergence_triangular_k0.py"), "plot script written");
  check(fs::exists(work / "a" / "convergence_triangular_k0_diagnostics.csv"),
        "projection diagnostics written");
  {
    const std::string body = slurp(csv_a);
    check(body.rfind("level,h,", 0) == 0, "csv starts with the header");
    check(body.find(",nan,") != std::string::npos, "first level reports nan rates");
  }

  // --- determinism ---------------------------------------------------------
  const std::string out_b = (work / "b").string();
  check(run(bin + convcmd + out_b + quiet) == 0, "repeat run exits 0");
  check(slurp(csv_a) == slurp(work / "b" / "convergence_triangular_k0.csv"),
        "repeat run reproduces the csv byte for byte");

  // --- config file ----------------------------------------------------------
  {
    const fs::path cfg = work / "run.cfg";
    std::ofstream c(cfg);
    c << "family=hexagonal\nlevels=1\nnu=0.5\n";
    c.close();
    const int st =
        run(bin + " convergence --config " + cfg.string() + " --out " + out_a + quiet);
    check(st == 0, "config-file run exits 0");
    check(fs::exists(work / "a" / "convergence_hexagonal_k0.csv"),
          "config file selects the hexagonal family");
  }

  // --- single solve ----------------------------------------------------------
  check(run(bin + " solve --family hexagonal --levels 1 -k 0 --out " + out_a + quiet) == 0,
        "single solve exits 0");
  check(fs::exists(work / "a" / "solve_hexagonal_k0.csv"), "solve summary written");
  {
    const fs::path fields = work / "a" / "solve_hexagonal_k0_fields.csv";
    check(fs::exists(fields), "sampled fields written");
    check(slurp(fields).rfind("x,y,u1,u2,p", 0) == 0, "fields csv starts with the header");
  }

  // --- stability probe guard -------------------------------------------------
  check(run(bin + " probe-stability --family triangular --levels 3 --out " + out_a + quiet) == 4,
        "probe refuses more than two levels with exit 4");
  {
    const std::string err = slurp(work / "stderr.txt");
    check(err.find("refusing") != std::string::npos, "guard message explains the refusal");
  }
  check(run(bin + " probe-stability --family triangular --levels 1 -k 0 --out " + out_a + quiet) ==
            0,
        "small probe runs to completion");
  check(fs::exists(work / "a" / "stability_triangular_k0.csv"), "probe csv written");

  // --- cavity ------------------------------------------------------------------
  check(run(bin + " cavity --family triangular --levels 1 --nu 1.0 --out " + out_a + quiet) == 0,
        "cavity run exits 0");
  check(fs::exists(work / "a" / "cavity_nu1.csv"), "cavity fields written");
  {
    const std::string sum = slurp(work / "a" / "cavity_nu1_summary.csv");
    check(sum.rfind("nu,h,dofs,iters,max_lid_u1,lid_l1_dev", 0) == 0,
          "cavity summary starts with the header");
  }

  std::printf("%s\n", g_failures == 0 ? "all cli checks passed" : "cli checks FAILED");
  fs::remove_all(work);
  return g_failures == 0 ? 0 : 1;
}
