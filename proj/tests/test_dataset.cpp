#include "leptovar/builtin.hpp"
#include "leptovar/dataset.hpp"
#include "leptovar/error.hpp"
#include "leptovar/random.hpp"

#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace leptovar;

namespace {

const char* kEightDayCsv =
    "t,f1,f2,y\n"
    "1,2.0,2.0,1.5\n"
    "2,1.8,6.2,-1.0\n"
    "3,5.0,1.8,4.0\n"
    "4,7.0,4.0,2.0\n"
    "5,6.0,6.0,1.0\n"
    "6,4.8,5.8,-0.5\n"
    "7,2.2,5.0,-2.0\n"
    "8,1.0,1.0,0.0\n";

std::string error_of(std::string_view text, const CsvOptions& opts = {}) {
    try {
        parse_csv(text, opts);
    } catch (const DataError& e) {
        return e.what();
    }
    return {};
}

} // namespace

TEST_CASE("parse_csv reads the eight-day panel") {
    const Dataset ds = parse_csv(kEightDayCsv);
    CHECK(ds.n_rows() == 8);
    CHECK(ds.n_columns() == 4);
    CHECK(ds.column_names() == std::vector<std::string>{"t", "f1", "f2", "y"});
    CHECK(ds.column("y")[2] == 4.0);
}

TEST_CASE("parse_csv drops the index column and handles quotes and CRLF") {
    const Dataset ds = parse_csv("Date,\"MEx\",SMB\r\n2015-05-01,0.5,\"-0.25\"\r\n2015-05-04,1,2\r\n",
                                 CsvOptions{',', true, "Date"});
    CHECK(ds.column_names() == std::vector<std::string>{"MEx", "SMB"});
    CHECK(ds.column("SMB")[0] == -0.25);
}

TEST_CASE("parse_csv without header names columns col1..colN") {
    const Dataset ds = parse_csv("1;2\n3;4\n", CsvOptions{';', false, std::nullopt});
    CHECK(ds.column_names() == std::vector<std::string>{"col1", "col2"});
    CHECK(ds.column("col2")[1] == 4.0);
}

TEST_CASE("parse_csv errors") {
    CHECK(error_of("") == "empty file");
    CHECK(error_of("a,b\n") == "empty dataset");
    const std::string bad = error_of("MEx,SMB\n1,2\n3,4\n5,n/a\n");
    CHECK(bad.find("row 3") != std::string::npos);
    CHECK(bad.find("SMB") != std::string::npos);
    CHECK(error_of("a,b\n1,2\n3\n").find("ragged") != std::string::npos);
    CHECK(error_of("a,a\n1,2\n").find("duplicate") != std::string::npos);
    CHECK(error_of("a,b\n1,inf\n").find("non-numeric") != std::string::npos);
    CHECK(error_of("a,b\n1,2\n", CsvOptions{',', true, "Date"}).find("index column") !=
          std::string::npos);
}

TEST_CASE("load_csv reports a missing file") {
    try {
        load_csv("/nonexistent/definitely/missing.csv");
        FAIL("expected DataError");
    } catch (const DataError& e) {
        CHECK(std::string(e.what()).find("file not found") != std::string::npos);
    }
}

TEST_CASE("Dataset rejects non-finite values and ragged columns") {
    CHECK_THROWS_AS(Dataset({{"a", {1.0, NAN}}}), DataError);
    CHECK_THROWS_AS(Dataset({{"a", {1.0, 2.0}}, {"b", {1.0}}}), DataError);
    CHECK_THROWS_AS(Dataset({{"", {1.0}}}), DataError);
}

TEST_CASE("write_csv round-trips values exactly") {
    Rng rng(7);
    std::vector<double> a(200), b(200);
    for (std::size_t i = 0; i < a.size(); ++i) {
        a[i] = rng.heavy_tailed() * 1e3;
        b[i] = rng.uniform(-1e-8, 1e-8);
    }
    const Dataset ds({{"a", a}, {"b", b}});
    std::ostringstream os;
    write_csv(os, ds);
    const Dataset back = parse_csv(os.str());
    CHECK(back.column_names() == ds.column_names());
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(back.column("a")[i] == a[i]);
        CHECK(back.column("b")[i] == b[i]);
    }
}

TEST_CASE("describe") {
    const Dataset ds = builtin::eight_day_panel();
    const auto stats = describe(ds);
    REQUIRE(stats.size() == 4);
    const ColumnStats& y = stats[3].stats;
    CHECK(stats[3].name == "y");
    CHECK(y.count == 8);
    CHECK(y.mean == doctest::Approx(0.625).epsilon(1e-15));
    CHECK(y.min == -2.0);
    CHECK(y.max == 4.0);
    // Sorted y: -2 -1 -0.5 0 1 1.5 2 4; positions 1.75, 3.5, 5.25.
    CHECK(y.q25 == doctest::Approx(-0.625));
    CHECK(y.median == doctest::Approx(0.5));
    CHECK(y.q75 == doctest::Approx(1.625));
    // Sample std: sqrt(8 * 3.171875 / 7).
    CHECK(y.std == doctest::Approx(std::sqrt(8.0 * 3.171875 / 7.0)));
    CHECK(y.min <= y.q25);
    CHECK(y.q25 <= y.median);
    CHECK(y.median <= y.q75);
    CHECK(y.q75 <= y.max);

    const auto again = describe(ds);
    CHECK(again[3].stats.std == y.std);
    CHECK(again[3].stats.q75 == y.q75);
}

TEST_CASE("describe of a constant column") {
    const auto s = column_stats(std::vector<double>{5.0, 5.0, 5.0, 5.0});
    CHECK(s.mean == 5.0);
    CHECK(s.std == 0.0);
    CHECK(s.min == 5.0);
    CHECK(s.max == 5.0);
}

TEST_CASE("correlations") {
    SUBCASE("symmetric with unit diagonal") {
        Rng rng(11);
        std::vector<Column> cols;
        for (int c = 0; c < 5; ++c) {
            std::vector<double> v(300);
            for (auto& x : v) x = rng.normal() + 0.3 * c;
            cols.push_back({"c" + std::to_string(c), v});
        }
        const auto m = correlations(Dataset(cols));
        for (std::size_t i = 0; i < m.size(); ++i) {
            CHECK(m(i, i) == 1.0);
            for (std::size_t j = 0; j < m.size(); ++j) {
                CHECK(std::abs(m(i, j) - m(j, i)) <= 1e-12);
                CHECK(std::abs(m(i, j)) <= 1.0);
            }
        }
    }
    SUBCASE("affine dependence gives 1") {
        const Dataset ds({{"a", {1, 2, 4, 8}}, {"b", {5, 7, 11, 19}}});
        CHECK(correlations(ds)(0, 1) == doctest::Approx(1.0).epsilon(1e-14));
    }
    SUBCASE("zero variance names the column") {
        const Dataset ds({{"a", {1, 2, 3}}, {"flat", {2, 2, 2}}});
        try {
            correlations(ds);
            FAIL("expected DataError");
        } catch (const DataError& e) {
            CHECK(std::string(e.what()).find("flat") != std::string::npos);
        }
    }
}

TEST_CASE("select") {
    const Dataset ds = builtin::eight_day_panel();
    const Selection sel = select(ds, "y", {"f1", "f2"});
    CHECK(sel.target.size() == 8);
    CHECK(sel.features.n_features() == 2);
    CHECK(sel.features.feature(1)[1] == 6.2);

    CHECK(select(ds, "y", {}).features.empty());
    CHECK_THROWS_AS(select(ds, "y", {"y"}), DataError);
    CHECK_THROWS_AS(select(ds, "y", {"nope"}), DataError);
    CHECK_THROWS_AS(select(ds, "nope", {"f1"}), DataError);
    CHECK_THROWS_AS(select(ds, "y", {"f1", "f1"}), DataError);
}
