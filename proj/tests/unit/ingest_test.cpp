#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "airnet/error.hpp"
#include "airnet/ingest.hpp"
#include "airnet/report.hpp"

using namespace airnet;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    explicit TempDir(const std::string& name) : path(fs::temp_directory_path() / name) {
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }

    fs::path write(const std::string& name, const std::string& content) const {
        const fs::path file = path / name;
        fs::create_directories(file.parent_path());
        std::ofstream out(file, std::ios::binary);
        out << content;
        return file;
    }
};

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    return std::string(std::istreambuf_iterator<char>(in), {});
}

const char* kTinySnapshot =
    "# period=2002H2\n"
    "src,dst\n"
    "PEK,SHA\n"
    "SHA,PEK\n"
    "PEK,CAN\n"
    "CAN,PEK\n"
    "SHA,CAN\n"
    "CAN,SHA\n";

}  // namespace

TEST_CASE("snapshot file parsing") {
    TempDir tmp("airnet_ingest_snapshot");

    SUBCASE("period comes from the comment") {
        const auto file = tmp.write("whatever.csv", kTinySnapshot);
        const auto g = parse_snapshot_file(file, {});
        CHECK(g.period() == PeriodLabel{2002, Half::H2});
        CHECK(g.node_count() == 3);
        CHECK(g.arc_count() == 6);
    }
    SUBCASE("period falls back to the file stem") {
        const auto file = tmp.write("2003H1.csv", "src,dst\nPEK,SHA\n");
        CHECK(parse_snapshot_file(file, {}).period() == PeriodLabel{2003, Half::H1});
    }
    SUBCASE("node comments add isolated airports") {
        const auto file =
            tmp.write("2003H1.csv", "src,dst\nPEK,SHA\n# node=LXA\n");
        const auto g = parse_snapshot_file(file, {});
        CHECK(g.node_count() == 3);
        CHECK(g.index_of("LXA") >= 0);
        CHECK(g.neighbors(g.index_of("LXA")).empty());
    }
    SUBCASE("malformed line reports file and line") {
        const auto file = tmp.write("2003H1.csv", "src,dst\nPEK,SHA\nPEK\n");
        CHECK_THROWS_WITH_AS(parse_snapshot_file(file, {}), doctest::Contains(":3"),
                             ParseError);
    }
    SUBCASE("missing header is rejected") {
        const auto file = tmp.write("2003H1.csv", "PEK,SHA\nSHA,PEK\n");
        CHECK_THROWS_AS(parse_snapshot_file(file, {}), ParseError);
    }
    SUBCASE("no period anywhere is an error") {
        const auto file = tmp.write("flights.csv", "src,dst\nPEK,SHA\n");
        CHECK_THROWS_WITH_AS(parse_snapshot_file(file, {}), doctest::Contains("period"),
                             ParseError);
    }
    SUBCASE("a UTF-8 BOM before the header is tolerated") {
        const auto file = tmp.write("2003H1.csv", "\xEF\xBB\xBFsrc,dst\nPEK,SHA\n");
        CHECK(parse_snapshot_file(file, {}).arc_count() == 1);
    }
    SUBCASE("isolated nodes respect the domestic filter") {
        const auto file = tmp.write("2003H1.csv", "src,dst\n# node=PEK\n# node=LAX\n");
        BuildOptions options;
        options.domestic = std::set<AirportId>{"PEK"};
        const auto g = parse_snapshot_file(file, options);
        CHECK(g.node_count() == 1);
        CHECK(g.index_of("LAX") == -1);
    }
}

TEST_CASE("snapshot directory parsing") {
    TempDir tmp("airnet_ingest_dir");
    tmp.write("b_2003H1.csv", "# period=2003H1\nsrc,dst\nPEK,SHA\n");
    tmp.write("a_2002H2.csv", "# period=2002H2\nsrc,dst\nPEK,SHA\n");

    const auto snapshots = parse_snapshot_dir(tmp.path, {});
    REQUIRE(snapshots.size() == 2);
    CHECK(snapshots[0].period() == PeriodLabel{2002, Half::H2});
    CHECK(snapshots[1].period() == PeriodLabel{2003, Half::H1});

    SUBCASE("duplicate periods are rejected") {
        tmp.write("c.csv", "# period=2002H2\nsrc,dst\nPEK,CAN\n");
        CHECK_THROWS_WITH_AS(parse_snapshot_dir(tmp.path, {}), doctest::Contains("duplicate"),
                             ParseError);
    }
}

TEST_CASE("merge map and domestic list parsing") {
    TempDir tmp("airnet_ingest_aux");
    const auto merge_file =
        tmp.write("merge.csv", "raw_code,city_code\npvg,SHA\nSZX , SZX\n");
    const auto merge = parse_merge_map(merge_file);
    CHECK(merge.canonical("PVG") == "SHA");
    CHECK(merge.canonical("pek") == "PEK");

    const auto strict = parse_merge_map(merge_file, /*strict=*/true);
    CHECK_THROWS_AS(strict.canonical("PEK"), ParseError);

    const auto domestic_file = tmp.write("domestic.txt", "# majors\nPEK\nsha\nCAN\n");
    const auto domestic = parse_domestic_list(domestic_file);
    CHECK(domestic == std::set<AirportId>{"PEK", "SHA", "CAN"});
}

TEST_CASE("traffic csv parsing") {
    TempDir tmp("airnet_ingest_traffic");

    SUBCASE("scopes split, gdp optional per row") {
        const auto file = tmp.write("traffic.csv",
                                    "date,scope,passengers,cargo_tonnes,gdp\n"
                                    "2007,NATIONAL,1000,45,140\n"
                                    "2008,NATIONAL,1100,49,\n"
                                    "2008,PEK,200,9,\n");
        const auto traffic = parse_traffic_csv(file);
        REQUIRE(traffic.size() == 2);
        const auto& national = traffic.at("NATIONAL");
        REQUIRE(national.observations.size() == 2);
        CHECK(national.observations[0].gdp == 140.0);
        CHECK(!national.observations[1].gdp.has_value());
        CHECK(traffic.at("PEK").observations[0].passengers == 200.0);
    }
    SUBCASE("cargo_kg converts to tonnes") {
        const auto file = tmp.write("kg.csv",
                                    "date,scope,passengers,cargo_kg\n"
                                    "2008,NATIONAL,1000,45000\n");
        CHECK(parse_traffic_csv(file).at("NATIONAL").observations[0].cargo_tonnes == 45.0);
    }
    SUBCASE("dates must increase per scope") {
        const auto file = tmp.write("bad.csv",
                                    "date,scope,passengers,cargo_tonnes\n"
                                    "2008,NATIONAL,1,1\n"
                                    "2008,NATIONAL,2,2\n");
        CHECK_THROWS_WITH_AS(parse_traffic_csv(file), doctest::Contains(":3"), ParseError);
    }
    SUBCASE("negative values are rejected") {
        const auto file = tmp.write("neg.csv",
                                    "date,scope,passengers,cargo_tonnes\n"
                                    "2008,NATIONAL,-1,1\n");
        CHECK_THROWS_AS(parse_traffic_csv(file), ParseError);
    }
}

TEST_CASE("points csv parsing") {
    TempDir tmp("airnet_ingest_points");
    const auto file = tmp.write("pts.csv", "x,y\n1,2\n2,4.5\n");
    const auto points = parse_points_csv(file);
    REQUIRE(points.size() == 2);
    CHECK(points[1] == Point{2.0, 4.5});
    CHECK_THROWS_AS(parse_points_csv(tmp.write("bad.csv", "x,y\n1\n")), ParseError);
}

TEST_CASE("run config parsing and validation") {
    TempDir tmp("airnet_ingest_config");
    tmp.write("snaps/2002H2.csv", kTinySnapshot);

    SUBCASE("round trip") {
        const auto file = tmp.write("run.conf",
                                    "# comment\n"
                                    "snapshots_dir = " + (tmp.path / "snaps").string() + "\n" +
                                    "out_dir = " + (tmp.path / "out").string() + "\n" +
                                    "format = json\n"
                                    "binning = raw\n"
                                    "workers = 3\n"
                                    "emit_timestamp = false\n");
        auto config = RunConfig::from_file(file);
        CHECK(config.format == "json");
        CHECK(config.binning == "raw");
        CHECK(config.workers == 3);
        CHECK(!config.emit_timestamp);
        config.validate();
    }
    SUBCASE("missing traffic file fails before any computation") {
        auto config = RunConfig{};
        config.snapshots_dir = tmp.path / "snaps";
        config.out_dir = tmp.path / "out";
        config.traffic_file = tmp.path / "absent.csv";
        CHECK_THROWS_AS(config.validate(), ConfigError);
    }
    SUBCASE("unknown keys are rejected") {
        const auto file = tmp.write("bad.conf", "snapshot_dir = x\n");
        CHECK_THROWS_AS(RunConfig::from_file(file), ConfigError);
    }
    SUBCASE("bad enums are rejected") {
        auto config = RunConfig{};
        config.snapshots_dir = tmp.path / "snaps";
        config.out_dir = tmp.path / "out";
        config.format = "xml";
        CHECK_THROWS_AS(config.validate(), ConfigError);
    }
}

TEST_CASE("run_report emits a deterministic bundle") {
    TempDir tmp("airnet_ingest_report");
    tmp.write("snaps/2002H2.csv", kTinySnapshot);
    tmp.write("snaps/2003H1.csv",
              "# period=2003H1\nsrc,dst\nPEK,SHA\nSHA,PEK\nPEK,CAN\nCAN,PEK\nSHA,CAN\nCAN,SHA\n");

    RunConfig config;
    config.snapshots_dir = tmp.path / "snaps";
    config.out_dir = tmp.path / "out1";
    config.emit_timestamp = false;
    config.binning = "raw";

    const auto result = run_report(config);
    CHECK(std::count(result.files.begin(), result.files.end(), "evolution.csv") == 1);
    CHECK(std::count(result.files.begin(), result.files.end(), "turnover_2002H2_2003H1.json") ==
          1);
    CHECK(std::count(result.files.begin(), result.files.end(), "metrics_2002H2.csv") == 1);
    CHECK(std::count(result.files.begin(), result.files.end(), "summary.json") == 1);

    SUBCASE("identical snapshots produce a zero turnover and equal metric rows") {
        const auto turnover = read_file(tmp.path / "out1" / "turnover_2002H2_2003H1.json");
        CHECK(turnover.find("\"pct_changed\": 0.0") != std::string::npos);
        CHECK(read_file(tmp.path / "out1" / "metrics_2002H2.csv")
                  .substr(std::string("# period=2002H2\n").size()) ==
              read_file(tmp.path / "out1" / "metrics_2003H1.csv")
                  .substr(std::string("# period=2003H1\n").size()));
    }

    SUBCASE("second run is byte-identical") {
        config.out_dir = tmp.path / "out2";
        const auto again = run_report(config);
        REQUIRE(again.files == result.files);
        for (const auto& name : result.files) {
            CHECK(read_file(tmp.path / "out1" / name) == read_file(tmp.path / "out2" / name));
        }
    }

    SUBCASE("json format swaps the tabular reports") {
        config.out_dir = tmp.path / "out_json";
        config.format = "json";
        const auto json_run = run_report(config);
        CHECK(std::count(json_run.files.begin(), json_run.files.end(),
                         "metrics_2002H2.json") == 1);
        CHECK(std::count(json_run.files.begin(), json_run.files.end(), "evolution.json") == 1);
        CHECK(read_file(tmp.path / "out_json" / "metrics_2002H2.json")
                  .find("\"knn\"") != std::string::npos);
    }
}
