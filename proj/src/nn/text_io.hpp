#pragma once

// Flat text weight files: "key value..." lines and "block <name> <rows> <cols>"
// headers followed by `rows` lines of row-major values at 17 significant digits.

#include "metroflow/core/scaler.hpp"
#include "metroflow/nn/dataset.hpp"

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

namespace metroflow::nn::text_io {

struct Block {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> values;
};

struct Document {
    std::string kind;
    std::map<std::string, std::vector<std::string>> fields;
    std::map<std::string, Block> blocks;

    const std::vector<std::string>& field(const std::string& key) const;
    double number(const std::string& key) const;
    std::size_t count(const std::string& key) const;
    const Block& block(const std::string& name, std::size_t rows, std::size_t cols) const;
};

std::string fmt(double v);
void write_header(std::ostream& out, const std::string& kind);
void write_field(std::ostream& out, const std::string& key, const std::string& value);
void write_block(std::ostream& out, const std::string& name, std::size_t rows, std::size_t cols,
                 const std::vector<double>& values);
void write_scaler(std::ostream& out, const MinMaxScaler& scaler);
void write_train_config(std::ostream& out, const TrainConfig& config);

Document read_document(std::istream& in, const std::string& expected_kind);
MinMaxScaler read_scaler(const Document& doc);
TrainConfig read_train_config(const Document& doc);

} // namespace metroflow::nn::text_io
