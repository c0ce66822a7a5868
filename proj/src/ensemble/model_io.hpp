#pragma once

// Shared pieces of the model-directory formats.

#include "../nn/text_io.hpp"
#include "metroflow/core/error.hpp"
#include "metroflow/ensemble/components.hpp"
#include "metroflow/vmd/vmd.hpp"

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

namespace metroflow::model_io {

void write_vmd_config(std::ostream& out, const VmdConfig& config);
VmdConfig read_vmd_config(const nn::text_io::Document& doc);
void write_setup(std::ostream& out, const DecompositionSetup& setup);
DecompositionSetup read_setup(const nn::text_io::Document& doc);

void write_series(std::ostream& out, const std::string& name, const std::vector<double>& values);
std::vector<double> read_series(const nn::text_io::Document& doc, const std::string& name);

void write_triple(std::ostream& out, const std::string& prefix, const ComponentTriple& triple);
ComponentTriple read_triple(const nn::text_io::Document& doc, const std::string& prefix);

std::ofstream open_out(const std::filesystem::path& path);
std::ifstream open_in(const std::filesystem::path& path);

template <class T, class Save>
void save_file(const std::filesystem::path& path, const T& value, Save&& save) {
    auto out = open_out(path);
    save(out, value);
    if (!out) throw DataError("cannot write " + path.string());
}

} // namespace metroflow::model_io
