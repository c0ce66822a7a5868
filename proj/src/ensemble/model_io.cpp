#include "model_io.hpp"

#include "metroflow/core/error.hpp"

namespace metroflow::model_io {

using nn::text_io::fmt;
using nn::text_io::write_field;

void write_vmd_config(std::ostream& out, const VmdConfig& c) {
    write_field(out, "k", std::to_string(c.k));
    write_field(out, "alpha", fmt(c.alpha));
    write_field(out, "tau", fmt(c.tau));
    write_field(out, "tol", fmt(c.tol));
    write_field(out, "max_iter", std::to_string(c.max_iter));
    write_field(out, "init_omega", to_string(c.init_omega));
    write_field(out, "vmd_seed", std::to_string(c.seed));
    write_field(out, "pin_dc", c.pin_dc ? "1" : "0");
    write_field(out, "mirror_extend", c.mirror_extend ? "1" : "0");
}

VmdConfig read_vmd_config(const nn::text_io::Document& doc) {
    VmdConfig c;
    c.k = static_cast<int>(doc.count("k"));
    c.alpha = doc.number("alpha");
    c.tau = doc.number("tau");
    c.tol = doc.number("tol");
    c.max_iter = static_cast<int>(doc.count("max_iter"));
    c.init_omega = omega_init_from_string(doc.field("init_omega").front());
    c.seed = doc.count("vmd_seed");
    c.pin_dc = doc.count("pin_dc") != 0;
    c.mirror_extend = doc.count("mirror_extend") != 0;
    c.validate();
    return c;
}

void write_setup(std::ostream& out, const DecompositionSetup& setup) {
    write_vmd_config(out, setup.vmd);
    write_field(out, "extension", std::to_string(setup.extension));
    write_field(out, "season", std::to_string(setup.season));
    write_field(out, "extension_mode", to_string(setup.mode));
}

DecompositionSetup read_setup(const nn::text_io::Document& doc) {
    DecompositionSetup setup;
    setup.vmd = read_vmd_config(doc);
    setup.extension = doc.count("extension");
    setup.season = doc.count("season");
    setup.mode = boundary_extension_from_string(doc.field("extension_mode").front());
    return setup;
}

void write_series(std::ostream& out, const std::string& name, const std::vector<double>& values) {
    nn::text_io::write_block(out, name, values.size(), 1, values);
}

std::vector<double> read_series(const nn::text_io::Document& doc, const std::string& name) {
    const auto it = doc.blocks.find(name);
    if (it == doc.blocks.end()) throw DataError(doc.kind + " file: missing block '" + name + "'");
    return doc.block(name, it->second.rows, 1).values;
}

void write_triple(std::ostream& out, const std::string& prefix, const ComponentTriple& t) {
    write_series(out, prefix + ".periodic", t.periodic);
    write_series(out, prefix + ".deterministic", t.deterministic);
    write_series(out, prefix + ".volatility", t.volatility);
}

ComponentTriple read_triple(const nn::text_io::Document& doc, const std::string& prefix) {
    ComponentTriple t{read_series(doc, prefix + ".periodic"), read_series(doc, prefix + ".deterministic"),
                      read_series(doc, prefix + ".volatility")};
    if (t.deterministic.size() != t.size() || t.volatility.size() != t.size()) {
        throw DataError(doc.kind + " file: component blocks differ in length");
    }
    return t;
}

std::ofstream open_out(const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write " + path.string());
    return out;
}

std::ifstream open_in(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("missing model file " + path.string());
    return in;
}

} // namespace metroflow::model_io
