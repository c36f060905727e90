#include <cstdio>
#include <fstream>
#include <sstream>

#include "armae/dataset.hpp"
#include "armae/rules.hpp"
#include "doctest.h"

using namespace armae;

namespace {

struct TempFile {
    std::string path;
    explicit TempFile(const std::string& contents) {
        static int counter = 0;
        path = "test_tmp_" + std::to_string(counter++) + ".csv";
        std::ofstream out(path);
        out << contents;
    }
    ~TempFile() { std::remove(path.c_str()); }
};

}  // namespace

TEST_CASE("load_categorical_csv one-hot expansion") {
    TempFile f("a,x\nb,x\n");
    const BinaryMatrix m = load_categorical_csv(f.path, false);
    REQUIRE(m.rows() == 2);
    REQUIRE(m.items() == 3);
    CHECK(m.item_names() == std::vector<std::string>{"c0=a", "c0=b", "c1=x"});
    CHECK(m.at(0, 0));
    CHECK_FALSE(m.at(0, 1));
    CHECK(m.at(0, 2));
    CHECK_FALSE(m.at(1, 0));
    CHECK(m.at(1, 1));
    CHECK(m.at(1, 2));
}

TEST_CASE("load_categorical_csv degenerate single column") {
    TempFile f("v\nv\nv\nv\nv\n");
    const BinaryMatrix m = load_categorical_csv(f.path, false);
    CHECK(m.rows() == 5);
    CHECK(m.items() == 1);
    for (std::size_t r = 0; r < 5; ++r) CHECK(m.at(r, 0));
}

TEST_CASE("load_categorical_csv per-column one-hot invariant") {
    TempFile f("a,p\nb,q\na,q\nc,p\n");
    const BinaryMatrix m = load_categorical_csv(f.path, false);
    // exactly one item set per original column per row
    for (std::size_t r = 0; r < m.rows(); ++r) {
        int first = 0, second = 0;
        for (ItemId i = 0; i < m.items(); ++i) {
            if (!m.at(r, i)) continue;
            if (m.item_names()[i].starts_with("c0="))
                ++first;
            else
                ++second;
        }
        CHECK(first == 1);
        CHECK(second == 1);
    }
}

TEST_CASE("load_categorical_csv with header row") {
    TempFile f("color,size\nred,big\nblue,small\n");
    const BinaryMatrix m = load_categorical_csv(f.path, true);
    CHECK(m.rows() == 2);
    CHECK(m.item_names() == std::vector<std::string>{"color=red", "color=blue",
                                                     "size=big", "size=small"});
}

TEST_CASE("load_categorical_csv errors") {
    CHECK_THROWS(load_categorical_csv("no_such_file.csv", false));
    TempFile ragged("a,b\nc\n");
    CHECK_THROWS(load_categorical_csv(ragged.path, false));
    TempFile empty("");
    CHECK_THROWS(load_categorical_csv(empty.path, false));
}

TEST_CASE("load_binary_csv direct parse") {
    TempFile f("A,B\n1,0\n");
    const BinaryMatrix m = load_binary_csv(f.path);
    REQUIRE(m.rows() == 1);
    CHECK(m.item_names() == std::vector<std::string>{"A", "B"});
    CHECK(m.at(0, 0));
    CHECK_FALSE(m.at(0, 1));
}

TEST_CASE("binary CSV round-trip") {
    SyntheticSpec spec;
    spec.rows = 50;
    spec.items = 7;
    spec.background_density = 0.4;
    spec.seed = 11;
    const BinaryMatrix m = generate_synthetic(spec);
    std::stringstream buf;
    write_binary_csv(buf, m);
    const BinaryMatrix back = read_binary_csv(buf);
    CHECK(m == back);
}

TEST_CASE("load_binary_csv rejects bad cells and duplicate names") {
    TempFile bad("A,B\n1,2\n");
    CHECK_THROWS(load_binary_csv(bad.path));
    TempFile dup("A,A\n1,0\n");
    CHECK_THROWS(load_binary_csv(dup.path));
}

TEST_CASE("load_binary_csv handles CRLF") {
    TempFile f("A,B\r\n1,1\r\n0,1\r\n");
    const BinaryMatrix m = load_binary_csv(f.path);
    CHECK(m.rows() == 2);
    CHECK(m.at(0, 0));
    CHECK(m.at(1, 1));
}

TEST_CASE("generate_synthetic planted pair with p=1") {
    SyntheticSpec spec;
    spec.rows = 1000;
    spec.items = 10;
    spec.planted_pairs = {{0, 1, 1.0}};
    spec.background_density = 0.3;
    spec.seed = 7;
    const BinaryMatrix m = generate_synthetic(spec);
    // brute-force confidence of {0} -> 1 must be exactly 1
    const ScoredRule sr = score_rule(m, Rule{Itemset({0}), 1});
    CHECK(sr.support > 0.0);
    CHECK(sr.confidence == 1.0);
}

TEST_CASE("generate_synthetic zero density") {
    SyntheticSpec spec;
    spec.rows = 20;
    spec.items = 4;
    spec.background_density = 0.0;
    spec.seed = 3;
    const BinaryMatrix m = generate_synthetic(spec);
    for (std::size_t r = 0; r < m.rows(); ++r)
        for (ItemId i = 0; i < m.items(); ++i) CHECK_FALSE(m.at(r, i));
}

TEST_CASE("generate_synthetic determinism") {
    SyntheticSpec spec;
    spec.rows = 200;
    spec.items = 12;
    spec.planted_pairs = {{2, 5, 0.7}};
    spec.background_density = 0.2;
    spec.seed = 99;
    CHECK(generate_synthetic(spec) == generate_synthetic(spec));
}
