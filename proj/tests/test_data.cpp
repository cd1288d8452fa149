#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <set>

#include "pipeforge/data.hpp"
#include "testutil.hpp"

using namespace pipeforge;

namespace {

struct TempFile {
    std::string path;
    explicit TempFile(const std::string& name, const std::string& content)
        : path("/tmp/pipeforge_test_" + name) {
        std::ofstream out(path, std::ios::binary);
        out << content;
    }
    ~TempFile() { std::remove(path.c_str()); }
};

}  // namespace

TEST_CASE("load_csv infers kinds by parseability") {
    TempFile f("infer.csv", "x,y,c\n1,a,p\n2.5,b,q\n-3e2,a,p\n");
    auto ds = load_csv(f.path, "c");
    REQUIRE(ds.table.n_cols() == 2);
    CHECK(ds.table.col(0).name() == "x");
    CHECK(ds.table.col(0).kind() == ColumnKind::Numeric);
    CHECK(ds.table.col(1).kind() == ColumnKind::Categorical);
    CHECK(ds.target.size() == 3);
    CHECK(ds.target.n_classes() == 2);
    CHECK(ds.table.col(0).num(2) == doctest::Approx(-300.0));
}

TEST_CASE("empty cell becomes NA in a numeric column") {
    TempFile f("na.csv", "x,c\n1,p\n,q\n3,p\n");
    auto ds = load_csv(f.path, "c");
    CHECK(ds.table.col(0).kind() == ColumnKind::Numeric);
    CHECK(ds.table.col(0).is_na(1));
    CHECK(ds.table.col(0).na_count() == 1);
}

TEST_CASE("profb-shaped file: 5 categorical + 5 numeric, 672 rows, 1200 NA") {
    // deterministic synthetic file with the same shape
    Rng rng(99);
    std::string text = "c0,c1,c2,c3,c4,n0,n1,n2,n3,n4,y\n";
    std::size_t na_left = 1200;
    const std::size_t cells = 672 * 10;
    std::size_t cell_idx = 0;
    for (int i = 0; i < 672; ++i) {
        for (int j = 0; j < 10; ++j) {
            bool make_na = false;
            // exact budget: spread the 1200 NAs over the 6720 cells
            std::size_t remaining_cells = cells - cell_idx;
            if (na_left > 0 && rng.below(remaining_cells) < na_left) {
                make_na = true;
                --na_left;
            }
            ++cell_idx;
            if (!make_na) {
                if (j < 5) text += (rng.below(2) ? "blue" : "red");
                else text += format_double(static_cast<double>(rng.below(1000)) / 7.0);
            }
            text += ',';
        }
        text += (i % 3 ? "home\n" : "away\n");
    }
    TempFile f("profb.csv", text);
    auto ds = load_csv(f.path, "y");
    REQUIRE(ds.table.n_rows() == 672);
    REQUIRE(ds.table.n_cols() == 10);
    int cat = 0, num = 0;
    for (std::size_t j = 0; j < 10; ++j)
        (ds.table.col(j).kind() == ColumnKind::Categorical ? cat : num) += 1;
    CHECK(cat == 5);
    CHECK(num == 5);
    CHECK(ds.table.na_count() == 1200);
}

TEST_CASE("load_csv error paths") {
    CHECK_THROWS_AS(load_csv("/tmp/pipeforge_no_such_file.csv", "y"), DataError);
    TempFile f1("notgt.csv", "a,b\n1,2\n");
    CHECK_THROWS_AS(load_csv(f1.path, "y"), DataError);
    TempFile f2("emptytgt.csv", "a,y\n1,p\n2,\n");
    CHECK_THROWS_AS(load_csv(f2.path, "y"), DataError);
    TempFile f3("ragged.csv", "a,b,y\n1,2,p\n1,q\n");
    CHECK_THROWS_AS(load_csv(f3.path, "y"), DataError);
    TempFile f4("numtgt.csv", "a,y\n1,0\n2,1\n");
    CHECK_THROWS_AS(load_csv(f4.path, "y", {{"y", ColumnKind::Numeric}}), DataError);
    // numeric-looking labels are still fine as categories
    auto ds = load_csv(f4.path, "y");
    CHECK(ds.target.n_classes() == 2);
}

TEST_CASE("schema hint forces categorical") {
    TempFile f("hint.csv", "a,y\n1,p\n2,q\n");
    auto ds = load_csv(f.path, "y", {{"a", ColumnKind::Categorical}});
    CHECK(ds.table.col(0).kind() == ColumnKind::Categorical);
    CHECK(ds.table.col(0).label(0) == "1");
}

TEST_CASE("rfc-4180 quoting") {
    TempFile f("quoted.csv", "a,y\n\"hi, there\",p\n\"say \"\"x\"\"\",q\n");
    auto ds = load_csv(f.path, "y");
    CHECK(ds.table.col(0).label(0) == "hi, there");
    CHECK(ds.table.col(0).label(1) == "say \"x\"");
}

TEST_CASE("csv round trip is cell-identical, NA included") {
    auto d = testutil::mixed_na_table(83, 3, 4, 0.07, 1234);
    const std::string path = "/tmp/pipeforge_test_roundtrip.csv";
    save_csv(d.table, &d.target, "y", path);
    auto ds = load_csv(path, "y");
    CHECK(testutil::tables_cell_equal(d.table, ds.table));
    REQUIRE(ds.target.size() == d.target.size());
    for (std::size_t i = 0; i < d.target.size(); ++i)
        CHECK(ds.target.label(i) == d.target.label(i));
    std::remove(path.c_str());
}

TEST_CASE("schema inference is deterministic") {
    auto d = testutil::mixed_na_table(50, 2, 2, 0.1, 7);
    const std::string path = "/tmp/pipeforge_test_deterministic.csv";
    save_csv(d.table, &d.target, "y", path);
    auto a = load_csv(path, "y");
    auto b = load_csv(path, "y");
    CHECK(testutil::tables_cell_equal(a.table, b.table));
    for (std::size_t j = 0; j < a.table.n_cols(); ++j)
        CHECK(a.table.col(j).kind() == b.table.col(j).kind());
    std::remove(path.c_str());
}

TEST_CASE("hconcat shapes and identity") {
    DataTable left({Column::numeric("a", {1, 2, 3}), Column::numeric("b", {4, 5, 6})});
    DataTable right({Column::numeric("c", {7, 8, 9})});
    DataTable joined = hconcat(left, right);
    CHECK(joined.n_cols() == 3);
    CHECK(joined.n_rows() == 3);

    DataTable empty(std::size_t{3});
    CHECK(testutil::tables_cell_equal(hconcat(left, empty), left));
    CHECK(testutil::tables_cell_equal(hconcat(empty, left), left));

    DataTable four(std::size_t{4});
    CHECK_THROWS_AS(hconcat(left, four), DataError);
}

TEST_CASE("hconcat resolves duplicate names deterministically") {
    DataTable left({Column::numeric("a", {1, 2})});
    DataTable right({Column::numeric("a", {3, 4}), Column::numeric("a_1", {5, 6})});
    DataTable joined = hconcat(left, right);
    REQUIRE(joined.n_cols() == 3);
    CHECK(joined.col(0).name() == "a");
    CHECK(joined.col(1).name() == "a_2");  // a and a_1 both taken
    CHECK(joined.col(2).name() == "a_1");
}

TEST_CASE("hconcat is associative up to nothing at all") {
    auto a = testutil::mixed_na_table(20, 1, 2, 0.0, 11).table;
    auto b = testutil::mixed_na_table(20, 2, 1, 0.0, 22).table;
    auto c = testutil::mixed_na_table(20, 1, 1, 0.0, 33).table;
    auto lhs = hconcat(hconcat(a, b), c);
    auto rhs = hconcat(a, hconcat(b, c));
    CHECK(testutil::tables_cell_equal(lhs, rhs));
}

TEST_CASE("one-hot-block-shaped union (breast-w layout)") {
    std::vector<Column> onehot;
    for (int j = 0; j < 2; ++j) {
        std::vector<double> v(699, 0.0);
        onehot.push_back(Column::numeric("c=" + std::to_string(j), std::move(v)));
    }
    std::vector<Column> numeric;
    for (int j = 0; j < 9; ++j) {
        std::vector<double> v(699, 1.0);
        numeric.push_back(Column::numeric("n" + std::to_string(j), std::move(v)));
    }
    DataTable joined = hconcat(DataTable(std::move(onehot)), DataTable(std::move(numeric)));
    CHECK(joined.n_rows() == 699);
    CHECK(joined.n_cols() == 11);
}

TEST_CASE("take_rows and target subsetting") {
    auto d = testutil::mixed_na_table(10, 1, 1, 0.0, 5);
    std::vector<std::size_t> rows = {1, 3, 5};
    auto sub = d.table.take_rows(rows);
    CHECK(sub.n_rows() == 3);
    CHECK(sub.col(1).num(0) == d.table.col(1).num(1));
    auto t = d.target.take(rows);
    CHECK(t.size() == 3);
    CHECK(t.class_set() == d.target.class_set());
    CHECK(t.label(2) == d.target.label(5));
}

TEST_CASE("duplicate column names are rejected") {
    std::vector<Column> cols;
    cols.push_back(Column::numeric("a", {1}));
    cols.push_back(Column::numeric("a", {2}));
    CHECK_THROWS_AS(DataTable(std::move(cols)), DataError);
}
