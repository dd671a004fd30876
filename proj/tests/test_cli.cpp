#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "radchem/cli.hpp"

using namespace radchem;
namespace fs = std::filesystem;

namespace
{
struct Run
{
    int code;
    std::string out;
    std::string err;
};

Run cli(std::vector<std::string> args)
{
    args.insert(args.begin(), "radchem");
    std::vector<char const*> argv;
    for (auto const& a : args)
        argv.push_back(a.c_str());
    std::ostringstream out;
    std::ostringstream err;
    int const code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

class Scratch
{
  public:
    Scratch()
        : dir_(fs::temp_directory_path()
               / ("radchem_cli_" + std::to_string(reinterpret_cast<std::uintptr_t>(this))))
    {
        fs::remove_all(dir_);
        fs::create_directories(dir_);
    }
    ~Scratch() { fs::remove_all(dir_); }

    fs::path write(std::string const& name, std::string const& text) const
    {
        std::ofstream(dir_ / name) << text;
        return dir_ / name;
    }
    fs::path operator/(std::string const& name) const { return dir_ / name; }

  private:
    fs::path dir_;
};

std::string slurp(fs::path const& path)
{
    std::ifstream in(path);
    std::stringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

std::string const kConfig = R"(n: 2
R: 1
alpha: 0.5
kappa: 1
M: 1
cells: 32
t_end: 0.005
initial.kind: gaussian
initial.mass: 10
)";
}  // namespace

TEST_CASE("simulate writes its products")
{
    Scratch scratch;
    auto config = scratch.write("run.yaml", kConfig);
    auto run = cli({"simulate", "--config", config.string(), "--out", (scratch / "out").string()});
    CHECK(run.code == kExitOk);
    for (char const* name : {"snapshot_initial.csv", "snapshot_final.csv", "series.csv", "report.txt"})
        CHECK(fs::exists(scratch / "out" / name));
    CHECK(slurp(scratch / "out" / "snapshot_final.csv").rfind("r,value,v\n", 0) == 0);
    CHECK(slurp(scratch / "out" / "report.txt").find("VERDICT") != std::string::npos);
}

TEST_CASE("verify prints the ledger")
{
    Scratch scratch;
    auto config = scratch.write("run.yaml", kConfig);
    auto run = cli({"verify", "--config", config.string()});
    CHECK(run.code == kExitOk);
    CHECK(run.out.find("CHECK mass_conservation pass") != std::string::npos);
    CHECK(run.out.find(" fail ") == std::string::npos);
}

TEST_CASE("sweep and plot")
{
    Scratch scratch;
    auto plan = scratch.write("plan.yaml", R"(base:
  n: 2
  R: 1
  kappa: 1
  M: 1
  cells: 16
  t_end: 0.001
  initial.kind: gaussian
  initial.mass: 5
alpha: [0, 0.5]
variants:
  narrow: {initial.width: 0.1}
)");
    auto out = (scratch / "sweep").string();
    auto run = cli({"sweep", "--plan", plan.string(), "--out", out, "--workers", "2", "--no-timing"});
    CHECK(run.code == kExitOk);
    auto table = slurp(scratch / "sweep" / "sweep.csv");
    CHECK(table.rfind("alpha,data_id,verdict,peak_linf,terminal_t,steps,wall_ms\n", 0) == 0);
    CHECK(table.find(",0.000\n") != std::string::npos);

    auto csv = scratch.write("series.csv", "t,mass,linf\n0,1,2\n1,1,3\n");
    auto svg = (scratch / "chart.svg").string();
    CHECK(cli({"plot", "--csv", csv.string(), "--cols", "mass,linf", "--out", svg}).code == kExitOk);
    CHECK(slurp(svg).rfind("<svg", 0) == 0);
    CHECK(cli({"plot", "--csv", csv.string(), "--cols", "nope", "--out", svg}).code
          == kExitConfigError);
}

TEST_CASE("exit codes")
{
    Scratch scratch;
    CHECK(cli({}).code == kExitConfigError);
    CHECK(cli({"simulate"}).code == kExitConfigError);
    CHECK(cli({"frobnicate"}).code == kExitConfigError);
    CHECK(cli({"--help"}).code == kExitOk);

    auto missing = cli({"verify", "--config", (scratch / "absent.yaml").string()});
    CHECK(missing.code == kExitIoError);

    auto bad = scratch.write("bad.yaml", kConfig + "radius: 3\n");
    auto run = cli({"verify", "--config", bad.string()});
    CHECK(run.code == kExitConfigError);
    CHECK(run.err.find("unknown key 'radius'") != std::string::npos);

    auto config = scratch.write("run.yaml", kConfig);
    auto blocker = scratch.write("file", "");
    CHECK(cli({"simulate", "--config", config.string(), "--out", (blocker / "sub").string()}).code
          == kExitIoError);
}
