#ifndef NMM_SERIALIZE_HPP
#define NMM_SERIALIZE_HPP

#include <string>
#include <vector>

#include "nmm/curve.hpp"

namespace nmm {

/// 17 significant digits, enough to round-trip a double exactly.
std::string format_double(double value);

/// Complex number as the fixed two-element array schema "[re, im]".
std::string format_complex(cplx value);

/// {"r": ..., "a": [[re, im], ...]}
std::string curve_to_json(const PolynomialCurve& curve);
PolynomialCurve curve_from_json(const std::string& text);

/// {"t0": ..., "t": [[re, im], ...]}
std::string moments_to_json(const HarmonicMoments& moments);
HarmonicMoments moments_from_json(const std::string& text);

/// Parses "re,im" (or a bare real) into a complex scalar.
cplx parse_complex(const std::string& text);

/// CSV per the fixed dialect: comma, '.' decimal, header row, LF endings,
/// doubles at 17 significant digits. Metadata lines are emitted first as
/// "# key=value".
struct CsvWriter {
    std::vector<std::pair<std::string, std::string>> metadata;
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    void add_row(const std::vector<double>& values);
    void add_row(std::vector<std::string> values);
    std::string str() const;
    void write(const std::string& path) const;
};

void write_text_file(const std::string& path, const std::string& content);

}

#endif
