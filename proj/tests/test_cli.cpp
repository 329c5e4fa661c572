// End-to-end checks of the vlclab command-line tool. Takes the binary path
// as argv[1] and drives it through std::system/popen.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <sys/wait.h>

namespace {

std::string g_cli;
int g_failures = 0;

#define CHECK_MSG(cond, msg)                                          \
    do {                                                              \
        if (!(cond)) {                                                \
            std::cerr << "FAIL " << __LINE__ << ": " << msg << "\n"; \
            ++g_failures;                                             \
        }                                                             \
    } while (0)

int run(const std::string& args) {
    int st = std::system((g_cli + " " + args + " >/dev/null 2>&1").c_str());
    return WIFEXITED(st) ? WEXITSTATUS(st) : -1;
}

std::string capture(const std::string& args) {
    std::string cmd = g_cli + " " + args + " 2>/dev/null";
    FILE* p = popen(cmd.c_str(), "r");
    if (!p) return "";
    std::string out;
    char buf[256];
    while (fgets(buf, sizeof(buf), p)) out += buf;
    pclose(p);
    return out;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

int main(int argc, char** argv) {
    if (argc < 2) {
        std::cerr << "usage: cli_tests <path-to-vlclab>\n";
        return 1;
    }
    g_cli = argv[1];

    // reflectance
    CHECK_MSG(capture("reflectance --material pine --led white") == "0.5059\n",
              "builtin pine/white reflectance");
    CHECK_MSG(run("reflectance --refl missing.csv --spd missing.csv") == 2,
              "missing spectrum file exits 2");
    {
        std::ofstream r("cli_refl.csv");
        r << "450,0.5\n650,0.5\n";
        std::ofstream s("cli_spd.csv");
        s << "450,1.0\n650,2.0\n";
    }
    CHECK_MSG(capture("reflectance --refl cli_refl.csv --spd cli_spd.csv") ==
                  "0.5\n",
              "flat 0.5 fixture");
    CHECK_MSG(run("reflectance") == 2, "reflectance without inputs exits 2");

    // simulate
    CHECK_MSG(run("simulate --material pine --led white --los 1 "
                  "--noise-level 1 --distance 60 --noiseless --seed 5 "
                  "--out cli_sim_a.csv") == 0,
              "noiseless simulate runs");
    CHECK_MSG(run("simulate --material pine --led white --los 1 "
                  "--noise-level 1 --distance 60 --noiseless --seed 5 "
                  "--out cli_sim_b.csv") == 0,
              "repeat simulate runs");
    CHECK_MSG(slurp("cli_sim_a.csv") == slurp("cli_sim_b.csv"),
              "simulate deterministic per seed");
    CHECK_MSG(slurp("cli_sim_a.csv").rfind("h1,h2,residual_imag\n", 0) == 0,
              "tap-estimate CSV header");
    CHECK_MSG(run("simulate --distance 500") == 2,
              "invalid distance exits 2");

    // campaign (hybrid grid keeps runtime short) twice: byte-identical
    CHECK_MSG(run("campaign --hybrid black-pine --seed 7 "
                  "--out cli_camp_a.csv") == 0,
              "hybrid campaign runs");
    CHECK_MSG(run("campaign --hybrid black-pine --seed 7 "
                  "--out cli_camp_b.csv") == 0,
              "hybrid campaign runs again");
    CHECK_MSG(slurp("cli_camp_a.csv") == slurp("cli_camp_b.csv"),
              "campaign deterministic per seed");
    CHECK_MSG(slurp("cli_camp_a.csv.meta.json").find("config_hash") !=
                  std::string::npos,
              "metadata carries the config hash");
    CHECK_MSG(run("campaign --hybrid bogus") == 2, "bad surface exits 2");

    // train / sweep / evaluate on the generated data
    CHECK_MSG(run("train --data cli_camp_a.csv --hidden 4 --seed 3 "
                  "--max-epochs 300 --model cli_model.json") == 0,
              "training runs");
    CHECK_MSG(slurp("cli_model.json").find("\"hidden\": 4") !=
                  std::string::npos,
              "model JSON written");
    CHECK_MSG(slurp("cli_model.json.curves.csv")
                      .rfind("epoch,train_mse,val_mse\n", 0) == 0,
              "curve CSV written");
    CHECK_MSG(run("train --data missing.csv") == 2,
              "missing dataset exits 2");

    std::string sweep_out =
        capture("sweep --data cli_camp_a.csv --candidates 2,4 --seed 3 "
                "--max-epochs 150 --out cli_sweep.csv");
    CHECK_MSG(sweep_out.find("best hidden size") != std::string::npos,
              "sweep prints the winner");
    std::string sweep_csv = slurp("cli_sweep.csv");
    CHECK_MSG(sweep_csv.find("\n2,") != std::string::npos &&
                  sweep_csv.find("\n4,") != std::string::npos,
              "sweep CSV lists both sizes");

    std::string eval_out =
        capture("evaluate --model cli_model.json --data cli_camp_a.csv "
                "--report cli_eval.json");
    CHECK_MSG(eval_out.find("mean % abs error") != std::string::npos,
              "evaluate prints the error summary");
    CHECK_MSG(slurp("cli_eval.json").find("mean_pct_abs_error") !=
                  std::string::npos,
              "evaluation report written");
    CHECK_MSG(slurp("cli_eval.json.h1.csv").rfind("bin_lo,bin_hi,count\n", 0) ==
                  0,
              "histogram CSV written");

    CHECK_MSG(run("nonsense") == 2, "unknown subcommand exits 2");
    CHECK_MSG(run("--help") == 0, "--help exits 0");

    for (const char* p :
         {"cli_refl.csv", "cli_spd.csv", "cli_sim_a.csv", "cli_sim_b.csv",
          "cli_camp_a.csv", "cli_camp_b.csv", "cli_camp_a.csv.meta.json",
          "cli_camp_b.csv.meta.json", "cli_model.json",
          "cli_model.json.curves.csv", "cli_sweep.csv", "cli_eval.json",
          "cli_eval.json.h1.csv", "cli_eval.json.h2.csv"})
        std::remove(p);

    if (g_failures == 0) {
        std::cout << "cli tests passed\n";
        return 0;
    }
    std::cerr << g_failures << " cli test(s) failed\n";
    return 1;
}
