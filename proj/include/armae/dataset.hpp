#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace armae {

using ItemId = std::uint32_t;

// Dense binary transaction table. Cells are stored column-wise as bitsets so
// support counting is an AND + popcount over 64-bit blocks.
class BinaryMatrix {
public:
    BinaryMatrix(std::vector<std::string> item_names, std::size_t rows);

    std::size_t rows() const { return rows_; }
    std::size_t items() const { return names_.size(); }
    std::size_t blocks() const { return blocks_; }
    const std::vector<std::string>& item_names() const { return names_; }

    void set(std::size_t row, ItemId item, bool value);
    bool at(std::size_t row, ItemId item) const;

    std::span<const std::uint64_t> column_bits(ItemId item) const;

    // Writes the row as 0.0/1.0 into out (length items()).
    void row_values(std::size_t row, double* out) const;

    bool operator==(const BinaryMatrix& other) const = default;

private:
    std::vector<std::string> names_;
    std::size_t rows_;
    std::size_t blocks_;
    std::vector<std::uint64_t> colbits_;  // items() * blocks_
};

struct PlantedPair {
    ItemId antecedent;
    ItemId consequent;
    double probability;  // P(consequent set | antecedent set)
};

struct SyntheticSpec {
    std::size_t rows = 0;
    std::size_t items = 0;
    std::vector<PlantedPair> planted_pairs;
    double background_density = 0.0;
    std::uint64_t seed = 0;
};

BinaryMatrix load_categorical_csv(const std::string& path, bool has_header);
BinaryMatrix load_binary_csv(const std::string& path);
BinaryMatrix read_binary_csv(std::istream& in);
void write_binary_csv(std::ostream& out, const BinaryMatrix& m);
void write_binary_csv(const std::string& path, const BinaryMatrix& m);

BinaryMatrix generate_synthetic(const SyntheticSpec& spec);

}  // namespace armae
