#include "nmm/serialize.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

#include "json.hpp"

namespace nmm {

std::string format_double(double value) {
    char buffer[64];
    std::snprintf(buffer, sizeof(buffer), "%.17g", value);
    return buffer;
}

std::string format_complex(cplx value) {
    return "[" + format_double(value.real()) + ", " + format_double(value.imag()) + "]";
}

namespace {

nlohmann::json complex_to_json(cplx z) {
    return nlohmann::json::array({z.real(), z.imag()});
}

cplx complex_from_json(const nlohmann::json& j) {
    if (!j.is_array() || j.size() != 2)
        throw std::invalid_argument("complex values must be [re, im] arrays");
    return {j[0].get<double>(), j[1].get<double>()};
}

}  // namespace

std::string curve_to_json(const PolynomialCurve& curve) {
    nlohmann::json j;
    j["r"] = curve.r;
    j["a"] = nlohmann::json::array();
    for (const auto& aj : curve.a) j["a"].push_back(complex_to_json(aj));
    return j.dump();
}

PolynomialCurve curve_from_json(const std::string& text) {
    auto j = nlohmann::json::parse(text);
    PolynomialCurve curve;
    curve.r = j.at("r").get<double>();
    for (const auto& item : j.at("a")) curve.a.push_back(complex_from_json(item));
    return curve;
}

std::string moments_to_json(const HarmonicMoments& moments) {
    nlohmann::json j;
    j["t0"] = moments.t0;
    j["t"] = nlohmann::json::array();
    for (const auto& tk : moments.t) j["t"].push_back(complex_to_json(tk));
    return j.dump();
}

HarmonicMoments moments_from_json(const std::string& text) {
    auto j = nlohmann::json::parse(text);
    HarmonicMoments moments;
    moments.t0 = j.at("t0").get<double>();
    for (const auto& item : j.at("t")) moments.t.push_back(complex_from_json(item));
    return moments;
}

cplx parse_complex(const std::string& text) {
    std::size_t comma = text.find(',');
    if (comma == std::string::npos) return {std::stod(text), 0.0};
    return {std::stod(text.substr(0, comma)), std::stod(text.substr(comma + 1))};
}

void CsvWriter::add_row(const std::vector<double>& values) {
    std::vector<std::string> formatted;
    formatted.reserve(values.size());
    for (double v : values) formatted.push_back(format_double(v));
    rows.push_back(std::move(formatted));
}

void CsvWriter::add_row(std::vector<std::string> values) {
    rows.push_back(std::move(values));
}

std::string CsvWriter::str() const {
    std::string out;
    for (const auto& [key, value] : metadata) out += "# " + key + "=" + value + "\n";
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (i) out += ",";
        out += header[i];
    }
    out += "\n";
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) out += ",";
            out += row[i];
        }
        out += "\n";
    }
    return out;
}

void CsvWriter::write(const std::string& path) const {
    write_text_file(path, str());
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream file(path, std::ios::binary);
    if (!file) throw std::runtime_error("cannot open " + path + " for writing");
    file << content;
    if (!file) throw std::runtime_error("write failed for " + path);
}

}
