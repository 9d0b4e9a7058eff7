// json_io.hpp: repo-wide JSON encoding of matrices and vectors:
//   {"dim": n, "entries": [[re, im], ...]}   (row-major for matrices)

#pragma once

#include <string>

#include "json.hpp"
#include "metricqm/linalg.hpp"

namespace metricqm {

class ParseError : public Error {
public:
    using Error::Error;
};

nlohmann::json to_json(const ComplexMatrix& m);
nlohmann::json to_json(const ComplexVector& v);

ComplexMatrix matrix_from_json(const nlohmann::json& j);
ComplexVector vector_from_json(const nlohmann::json& j);

ComplexMatrix load_matrix_file(const std::string& path);

}  // namespace metricqm
