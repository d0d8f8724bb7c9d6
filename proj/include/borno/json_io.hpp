#pragma once

#include <initializer_list>
#include <string>
#include <vector>

#include <json.hpp>

#include "borno/algebra.hpp"
#include "borno/finrank.hpp"
#include "borno/maps.hpp"
#include "borno/seqspace.hpp"

namespace borno::io {

using Json = nlohmann::json;

inline constexpr const char* kSchema = "borno/1";

/// Sorted keys, no whitespace, integers as integers and floats as %.17g.
std::string canonical_dump(const Json& j);
std::string sha256_hex(const std::string& bytes);
/// SHA-256 of the canonical dump.
std::string digest(const Json& j);

/// Finite doubles as numbers; inf, -inf and nan as strings.
Json number(double x);
Json numbers(const std::vector<double>& xs);
Json enclosure(const Enclosure& e);

/// Throws InvalidInput naming `where` when j has a key outside `allowed`.
void require_fields(const Json& j, std::initializer_list<const char*> allowed, const std::string& where);
/// Throws InvalidInput unless j is an object carrying "schema": "borno/1".
void require_schema(const Json& j, const std::string& where);

double get_double(const Json& j, const char* key, const std::string& where);
double get_double(const Json& j, const char* key, double fallback, const std::string& where);
std::int64_t get_int(const Json& j, const char* key, const std::string& where);
std::int64_t get_int(const Json& j, const char* key, std::int64_t fallback, const std::string& where);

// Finite-dimensional algebras.
AlgebraDescriptor descriptor_from_json(const Json& j);
Json to_json(const AlgebraDescriptor& d);
/// Rows of entries; an entry is a real number or [re, im].
Matrix matrix_from_json(const Json& j, const std::string& where);
Json to_json(const Matrix& m);
/// {"blocks": [matrix, ...]} or, for single-block algebras, a bare matrix.
AlgebraElement element_from_json(const DescriptorPtr& d, const Json& j);
Json to_json(const AlgebraElement& a);
/// {"descriptor", "generators", "hull"?}
BoundedSet bounded_set_from_json(const Json& j);
Json to_json(const BoundedSet& s);
/// {"source", "target", "basis_action"}
LinearMap linear_map_from_json(const Json& j);
Json to_json(const LinearMap& f);

// Sequence spaces.
Monomial monomial_from_json(const Json& j, const std::string& where);
Json to_json(const Monomial& m);
ModelVector vector_from_json(const Json& j);
Json to_json(const ModelVector& v);
/// {"disks": [{"weight", "kind"}], "support"?, "horizon"?}
ModelSpace space_from_json(const Json& j);
Json to_json(const ModelSpace& s);
/// {"prefix"?: [vector], "terms": [term]}
SequenceModel sequence_from_json(const Json& j);
Json to_json(const SequenceModel& x);
/// Array of terms, or a string such as "geometric(1,0.5)+inverse_poly(1,1,1,2)".
NullSequence null_sequence_from_json(const Json& j);
NullSequence parse_null_sequence(const std::string& desc);
Json to_json(const NullSequence& e);

// Finite-rank models.
AmbientGauge ambient_from_json(const Json& j);
CompactSetModel compact_set_from_json(const Json& j);
Multiplier multiplier_from_json(const Json& j);
Json to_json(const Multiplier& m);
OperatorFamily family_from_json(const Json& j);

}  // namespace borno::io
