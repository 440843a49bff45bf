// Writes the synthetic course fixture (questions, vendor-format responses,
// column mapping and annotator labels) to a directory.

#include <CLI11.hpp>

#include <iostream>

#include "eit/error.hpp"
#include "eit/synthetic.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Generate the synthetic course fixture", "eit-fixture"};
  std::string out_dir;
  std::uint64_t seed = 2023;
  app.add_option("--out", out_dir, "Output directory")->required();
  app.add_option("--seed", seed, "Generator seed")->capture_default_str();
  CLI11_PARSE(app, argc, argv);

  try {
    eit::synthetic::write_course_fixture(out_dir, eit::synthetic::make_course_fixture(seed));
  } catch (const eit::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  std::cerr << "seed=" << seed << '\n';
  return 0;
}
