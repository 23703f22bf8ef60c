// Example catalog, JSON presentation documents and report rendering.
#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "qha/qha.hpp"

namespace qha {

class SchemaError : public Error {
 public:
  SchemaError(std::string path, const std::string& msg)
      : Error("SchemaError", path + ": " + msg), path_(std::move(path)) {}
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

class UnknownCatalogName : public Error {
 public:
  explicit UnknownCatalogName(const std::string& n) : Error("UnknownCatalogName", n) {}
};

/// "H2", "H8+", "H8-", "kZ2-hopf".
const std::vector<std::string>& catalog_names();
/// Raw (unvalidated) catalog data.
QhaPresentation catalog_raw(const std::string& name);
/// Validated catalog presentation.
QhaPresentation catalog_build(const std::string& name);
/// ω = (1 ± i)/2 for H_±(8); sign is +1 or -1.
Scalar omega(int sign);

/// Presentation ↔ JSON document. Import validates the schema (SchemaError
/// with a JSON pointer) and then runs load_and_validate.
nlohmann::ordered_json to_document(const QhaPresentation& H);
QhaPresentation from_document_raw(const nlohmann::json& doc);
QhaPresentation from_document(const nlohmann::json& doc);
/// Canonical text of a document: one member per line, sparse entries one per
/// line, trailing newline.
std::string export_text(const QhaPresentation& H);
QhaPresentation import_text(const std::string& text);
QhaPresentation import_file(const std::string& path);
/// Schema-checked but not axiom-validated.
QhaPresentation import_file_raw(const std::string& path);
void export_file(const QhaPresentation& H, const std::string& path);

/// "catalog:NAME" or a file path.
QhaPresentation load_source(const std::string& source);

nlohmann::ordered_json report_json(const std::string& algebra, const VerificationReport& rep);
std::string report_text(const std::string& algebra, const VerificationReport& rep);

}  // namespace qha
