// LR (TF-IDF) on the public D1 dev split. Needs SEVSTACK_D1_DIR holding the
// shared-task train.tsv and dev.tsv (columns PID, Text_data, Label); exits 77
// (skipped) without it.

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <sstream>

#include "cli.hpp"
#include "config.hpp"
#include "json.hpp"
#include "pipeline.hpp"

namespace {

constexpr double kTarget = 0.38;
constexpr double kTolerance = 0.08;
constexpr int kSkipped = 77;

std::filesystem::path env_path(const char* name, const std::filesystem::path& fallback) {
  const char* v = std::getenv(name);
  return v && *v ? std::filesystem::path(v) : fallback;
}

}  // namespace

int main() {
  const char* dir = std::getenv("SEVSTACK_D1_DIR");
  if (!dir || !*dir) {
    std::printf("SKIP  D1 baseline LR (TF-IDF) dev  SEVSTACK_D1_DIR is not set\n");
    return kSkipped;
  }
  const auto train = env_path("SEVSTACK_D1_TRAIN", std::filesystem::path(dir) / "train.tsv");
  const auto dev = env_path("SEVSTACK_D1_DEV", std::filesystem::path(dir) / "dev.tsv");
  for (const auto& p : {train, dev}) {
    if (!std::filesystem::exists(p)) {
      std::printf("SKIP  D1 baseline LR (TF-IDF) dev  %s not found\n", p.string().c_str());
      return kSkipped;
    }
  }

  const auto out = std::filesystem::temp_directory_path() / "sevstack-d1-baseline";
  std::ostringstream ini;
  ini << "[run]\nseed = 1\nout = " << out.string() << "\n\n[data]\nname = D1\ntrain = " << train.string()
      << "\ntest = " << dev.string()
      << "\neval_split = dev\nscheme = d1\nid_column = PID\ntext_column = Text_data\nlabel_column = Label\n"
         "delimiter = tab\n\n[model]\nlearner = lr\n";
  const auto config = out / "d1.ini";
  sevstack::write_file(config, ini.str());

  std::ostringstream log, err;
  if (sevstack::cli::run_cli({"--config", config.string(), "run"}, log, err) != 0) {
    std::printf("FAIL  D1 baseline LR (TF-IDF) dev  %s", err.str().c_str());
    return EXIT_FAILURE;
  }
  const auto paths = sevstack::cli::layout(sevstack::cli::load_run_config(config));
  const auto report = nlohmann::json::parse(sevstack::read_file(paths.report_prefix().string() + ".json"));
  const double f1 = report.at("f1").get<double>();
  const bool pass = std::abs(f1 - kTarget) <= kTolerance;
  std::printf("%s  D1 baseline LR (TF-IDF) dev  weighted F1 %.4f, target %.2f +/- %.2f\n", pass ? "PASS" : "FAIL", f1,
              kTarget, kTolerance);
  return pass ? EXIT_SUCCESS : EXIT_FAILURE;
}
