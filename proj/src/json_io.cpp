#include "metricqm/json_io.hpp"

#include <fstream>

namespace metricqm {

using nlohmann::json;

namespace {

json encode_entries(std::span<const cplx> xs) {
    json arr = json::array();
    for (const auto& z : xs) arr.push_back(json::array({z.real(), z.imag()}));
    return arr;
}

std::vector<cplx> decode_entries(const json& j, std::size_t expected) {
    if (!j.is_object() || !j.contains("dim") || !j.contains("entries")) {
        throw ParseError("expected an object with \"dim\" and \"entries\"");
    }
    const auto& entries = j.at("entries");
    if (!entries.is_array() || entries.size() != expected) {
        throw ParseError("\"entries\" must be an array of length " + std::to_string(expected));
    }
    std::vector<cplx> out;
    out.reserve(expected);
    for (const auto& e : entries) {
        if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number()) {
            throw ParseError("each entry must be a [re, im] pair of numbers");
        }
        out.emplace_back(e[0].get<double>(), e[1].get<double>());
    }
    return out;
}

std::size_t decode_dim(const json& j) {
    if (!j.is_object() || !j.contains("dim") || !j.at("dim").is_number_integer()) {
        throw ParseError("\"dim\" must be a positive integer");
    }
    const auto dim = j.at("dim").get<long long>();
    if (dim <= 0) throw ParseError("\"dim\" must be a positive integer");
    return static_cast<std::size_t>(dim);
}

}  // namespace

json to_json(const ComplexMatrix& m) {
    return json{{"dim", m.dim()}, {"entries", encode_entries(m.entries())}};
}

json to_json(const ComplexVector& v) {
    return json{{"dim", v.dim()}, {"entries", encode_entries(v.entries())}};
}

ComplexMatrix matrix_from_json(const json& j) {
    const auto dim = decode_dim(j);
    try {
        return ComplexMatrix(dim, decode_entries(j, dim * dim));
    } catch (const std::invalid_argument& e) {
        throw ParseError(e.what());
    }
}

ComplexVector vector_from_json(const json& j) {
    const auto dim = decode_dim(j);
    try {
        return ComplexVector(decode_entries(j, dim));
    } catch (const std::invalid_argument& e) {
        throw ParseError(e.what());
    }
}

ComplexMatrix load_matrix_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ParseError(path + ": " + e.what());
    }
    return matrix_from_json(j);
}

}  // namespace metricqm
