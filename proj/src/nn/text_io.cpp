#include "text_io.hpp"

#include "metroflow/core/error.hpp"

#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

namespace metroflow::nn::text_io {

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

const std::vector<std::string>& Document::field(const std::string& key) const {
    const auto it = fields.find(key);
    if (it == fields.end() || it->second.empty()) throw DataError(kind + " file: missing field '" + key + "'");
    return it->second;
}

double Document::number(const std::string& key) const {
    try {
        return std::stod(field(key).front());
    } catch (const std::logic_error&) {
        throw DataError(kind + " file: malformed number for '" + key + "'");
    }
}

std::size_t Document::count(const std::string& key) const {
    try {
        return std::stoull(field(key).front());
    } catch (const std::logic_error&) {
        throw DataError(kind + " file: malformed integer for '" + key + "'");
    }
}

const Block& Document::block(const std::string& name, std::size_t rows, std::size_t cols) const {
    const auto it = blocks.find(name);
    if (it == blocks.end()) throw DataError(kind + " file: missing block '" + name + "'");
    if (it->second.rows != rows || it->second.cols != cols) {
        throw DataError(kind + " file: block '" + name + "' has unexpected dimensions");
    }
    return it->second;
}

void write_header(std::ostream& out, const std::string& kind) { out << "# metroflow " << kind << '\n'; }

void write_field(std::ostream& out, const std::string& key, const std::string& value) {
    out << key << ' ' << value << '\n';
}

void write_block(std::ostream& out, const std::string& name, std::size_t rows, std::size_t cols,
                 const std::vector<double>& values) {
    out << "block " << name << ' ' << rows << ' ' << cols << '\n';
    for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t c = 0; c < cols; ++c) out << (c ? " " : "") << fmt(values[r * cols + c]);
        out << '\n';
    }
}

void write_scaler(std::ostream& out, const MinMaxScaler& s) {
    out << "scaler " << fmt(s.low()) << ' ' << fmt(s.high()) << ' ' << fmt(s.target_lo()) << ' ' << fmt(s.target_hi())
        << '\n';
}

void write_train_config(std::ostream& out, const TrainConfig& c) {
    out << "train " << fmt(c.learning_rate) << ' ' << c.epochs << ' ' << c.batch_size << ' ' << fmt(c.momentum) << ' '
        << fmt(c.clip_norm) << '\n';
}

Document read_document(std::istream& in, const std::string& expected_kind) {
    Document doc;
    doc.kind = expected_kind;
    std::string line;
    bool header = false;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (line[0] == '#') {
            if (line == "# metroflow " + expected_kind) header = true;
            continue;
        }
        std::istringstream ss(line);
        std::string key;
        ss >> key;
        if (key == "block") {
            std::string name;
            Block b;
            if (!(ss >> name >> b.rows >> b.cols)) throw DataError(expected_kind + " file: malformed block header");
            b.values.reserve(b.rows * b.cols);
            for (std::size_t r = 0; r < b.rows; ++r) {
                if (!std::getline(in, line)) throw DataError(expected_kind + " file: truncated block '" + name + "'");
                std::istringstream row(line);
                std::string tok;
                std::size_t n = 0;
                while (row >> tok) {
                    try {
                        b.values.push_back(std::stod(tok));
                    } catch (const std::logic_error&) {
                        throw DataError(expected_kind + " file: malformed value in block '" + name + "'");
                    }
                    ++n;
                }
                if (n != b.cols) throw DataError(expected_kind + " file: wrong column count in block '" + name + "'");
            }
            doc.blocks[name] = std::move(b);
            continue;
        }
        std::vector<std::string> values;
        std::string tok;
        while (ss >> tok) values.push_back(tok);
        doc.fields[key] = std::move(values);
    }
    if (!header) throw DataError("not a " + expected_kind + " file");
    return doc;
}

MinMaxScaler read_scaler(const Document& doc) {
    const auto& f = doc.field("scaler");
    if (f.size() != 4) throw DataError(doc.kind + " file: malformed scaler");
    return MinMaxScaler(std::stod(f[0]), std::stod(f[1]), std::stod(f[2]), std::stod(f[3]));
}

TrainConfig read_train_config(const Document& doc) {
    const auto& f = doc.field("train");
    if (f.size() != 5) throw DataError(doc.kind + " file: malformed train config");
    TrainConfig c;
    c.learning_rate = std::stod(f[0]);
    c.epochs = std::stoi(f[1]);
    c.batch_size = std::stoull(f[2]);
    c.momentum = std::stod(f[3]);
    c.clip_norm = std::stod(f[4]);
    return c;
}

} // namespace metroflow::nn::text_io
