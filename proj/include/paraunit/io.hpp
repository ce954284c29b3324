#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <variant>

#include "paraunit/fit.hpp"
#include "paraunit/param.hpp"
#include "paraunit/repr.hpp"

namespace paraunit::io {

inline constexpr std::string_view kFormatVersion = "paraunit/1";

/// Everything that can live in a document file. Reports are produced by the
/// CLI and never read back.
using Document = std::variant<BlaschkePotapovForm, StateSpaceRealization, MFDForm, LaurentPolyForm,
                              ParaunitaryParam, SampleSet>;

/// "bp", "ss", "mfd", "laurent", "params" or "samples".
std::string_view kind_of(const Document& doc);

/// Pretty-printed JSON text, one field per line. Finite values round-trip
/// bit for bit.
std::string write_document(const Document& doc);

/// Throws Error(ParseError) naming the line/column of a syntax error or the
/// path of the offending field. Blaschke-Potapov documents are checked for
/// consistent shapes only; unit norms are left to the certificates.
Document read_document(std::string_view text);

Document load_document(const std::filesystem::path& path);
void save_document(const std::filesystem::path& path, const Document& doc);

}  // namespace paraunit::io
