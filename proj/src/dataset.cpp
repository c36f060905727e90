#include "armae/dataset.hpp"

#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

namespace armae {
namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    for (char ch : line) {
        if (ch == ',') {
            fields.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(ch);
        }
    }
    fields.push_back(cur);
    return fields;
}

std::vector<std::vector<std::string>> read_csv_rows(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open file: " + path);
    std::vector<std::vector<std::string>> rows;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() && in.peek() == std::char_traits<char>::eof()) break;
        rows.push_back(split_csv_line(line));
    }
    if (rows.empty()) throw std::runtime_error("empty file: " + path);
    for (const auto& r : rows) {
        if (r.size() != rows.front().size())
            throw std::runtime_error("ragged rows in " + path);
    }
    return rows;
}

}  // namespace

BinaryMatrix::BinaryMatrix(std::vector<std::string> item_names, std::size_t rows)
    : names_(std::move(item_names)),
      rows_(rows),
      blocks_((rows + 63) / 64),
      colbits_(names_.size() * blocks_, 0) {
    if (rows_ == 0) throw std::invalid_argument("BinaryMatrix needs rows >= 1");
    std::unordered_set<std::string> seen;
    for (const auto& n : names_) {
        if (!seen.insert(n).second)
            throw std::invalid_argument("duplicate item name: " + n);
    }
}

void BinaryMatrix::set(std::size_t row, ItemId item, bool value) {
    std::uint64_t& block = colbits_[item * blocks_ + row / 64];
    const std::uint64_t bit = std::uint64_t{1} << (row % 64);
    if (value)
        block |= bit;
    else
        block &= ~bit;
}

bool BinaryMatrix::at(std::size_t row, ItemId item) const {
    return (colbits_[item * blocks_ + row / 64] >> (row % 64)) & 1;
}

std::span<const std::uint64_t> BinaryMatrix::column_bits(ItemId item) const {
    if (item >= items()) throw std::out_of_range("invalid ItemId");
    return {colbits_.data() + item * blocks_, blocks_};
}

void BinaryMatrix::row_values(std::size_t row, double* out) const {
    for (std::size_t i = 0; i < items(); ++i)
        out[i] = at(row, static_cast<ItemId>(i)) ? 1.0 : 0.0;
}

BinaryMatrix load_categorical_csv(const std::string& path, bool has_header) {
    auto raw = read_csv_rows(path);
    std::vector<std::string> col_names;
    std::size_t first_data = 0;
    const std::size_t ncols = raw.front().size();
    if (has_header) {
        col_names = raw.front();
        first_data = 1;
        if (raw.size() < 2) throw std::runtime_error("no data rows in " + path);
    } else {
        for (std::size_t c = 0; c < ncols; ++c)
            col_names.push_back("c" + std::to_string(c));
    }

    // One-hot items: per column, category values in first-appearance order.
    std::vector<std::vector<std::string>> values_per_col(ncols);
    std::vector<std::unordered_map<std::string, ItemId>> local_index(ncols);
    for (std::size_t r = first_data; r < raw.size(); ++r) {
        for (std::size_t c = 0; c < ncols; ++c) {
            const std::string& v = raw[r][c];
            auto [it, inserted] = local_index[c].try_emplace(
                v, static_cast<ItemId>(values_per_col[c].size()));
            if (inserted) values_per_col[c].push_back(v);
        }
    }

    std::vector<std::string> item_names;
    std::vector<ItemId> col_base(ncols);
    for (std::size_t c = 0; c < ncols; ++c) {
        col_base[c] = static_cast<ItemId>(item_names.size());
        for (const auto& v : values_per_col[c])
            item_names.push_back(col_names[c] + "=" + v);
    }

    const std::size_t nrows = raw.size() - first_data;
    BinaryMatrix m(std::move(item_names), nrows);
    for (std::size_t r = first_data; r < raw.size(); ++r) {
        for (std::size_t c = 0; c < ncols; ++c) {
            const ItemId id = col_base[c] + local_index[c].at(raw[r][c]);
            m.set(r - first_data, id, true);
        }
    }
    return m;
}

BinaryMatrix read_binary_csv(std::istream& in) {
    std::vector<std::vector<std::string>> raw;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() && in.peek() == std::char_traits<char>::eof()) break;
        raw.push_back(split_csv_line(line));
    }
    if (raw.size() < 2) throw std::runtime_error("binary CSV needs a header and data rows");
    for (const auto& r : raw) {
        if (r.size() != raw.front().size())
            throw std::runtime_error("ragged rows in binary CSV");
    }
    BinaryMatrix m(raw.front(), raw.size() - 1);
    for (std::size_t r = 1; r < raw.size(); ++r) {
        for (std::size_t c = 0; c < raw[r].size(); ++c) {
            const std::string& cell = raw[r][c];
            if (cell == "1")
                m.set(r - 1, static_cast<ItemId>(c), true);
            else if (cell != "0")
                throw std::runtime_error("non-binary cell: \"" + cell + "\"");
        }
    }
    return m;
}

BinaryMatrix load_binary_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open file: " + path);
    return read_binary_csv(in);
}

void write_binary_csv(std::ostream& out, const BinaryMatrix& m) {
    for (std::size_t i = 0; i < m.items(); ++i) {
        if (i) out << ',';
        out << m.item_names()[i];
    }
    out << '\n';
    for (std::size_t r = 0; r < m.rows(); ++r) {
        for (std::size_t i = 0; i < m.items(); ++i) {
            if (i) out << ',';
            out << (m.at(r, static_cast<ItemId>(i)) ? '1' : '0');
        }
        out << '\n';
    }
}

void write_binary_csv(const std::string& path, const BinaryMatrix& m) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write file: " + path);
    write_binary_csv(out, m);
}

BinaryMatrix generate_synthetic(const SyntheticSpec& spec) {
    if (spec.rows == 0 || spec.items < 2)
        throw std::invalid_argument("synthetic spec needs rows >= 1, items >= 2");
    if (spec.background_density < 0.0 || spec.background_density > 1.0)
        throw std::invalid_argument("background_density outside [0,1]");
    for (const auto& p : spec.planted_pairs) {
        if (p.antecedent >= spec.items || p.consequent >= spec.items ||
            p.antecedent == p.consequent)
            throw std::invalid_argument("invalid planted pair");
        if (p.probability < 0.0 || p.probability > 1.0)
            throw std::invalid_argument("planted probability outside [0,1]");
    }

    std::vector<std::string> names;
    names.reserve(spec.items);
    for (std::size_t i = 0; i < spec.items; ++i)
        names.push_back("i" + std::to_string(i));

    BinaryMatrix m(std::move(names), spec.rows);
    std::mt19937_64 rng(spec.seed);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    for (std::size_t r = 0; r < spec.rows; ++r) {
        for (std::size_t i = 0; i < spec.items; ++i) {
            if (unif(rng) < spec.background_density)
                m.set(r, static_cast<ItemId>(i), true);
        }
    }
    for (const auto& p : spec.planted_pairs) {
        for (std::size_t r = 0; r < spec.rows; ++r) {
            if (m.at(r, p.antecedent) && unif(rng) < p.probability)
                m.set(r, p.consequent, true);
        }
    }
    return m;
}

}  // namespace armae
