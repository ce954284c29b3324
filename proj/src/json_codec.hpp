#pragma once

// JSON encoders shared by the document writer and the CLI report builder.

#include <json.hpp>

#include "paraunit/io.hpp"

namespace paraunit::io::detail {

using json = nlohmann::ordered_json;

json complex_to_json(Complex z);
json matrix_to_json(const ComplexMatrix& a);
json document_to_json(const Document& doc);

}  // namespace paraunit::io::detail
