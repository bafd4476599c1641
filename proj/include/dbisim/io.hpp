#pragma once

// JSON model formats and result dumps. Rationals are written as "p/q" strings
// and read from strings or JSON integers.

#include <json.hpp>

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "dbisim/abstraction.hpp"
#include "dbisim/bisim.hpp"
#include "dbisim/ct_models.hpp"
#include "dbisim/pa.hpp"
#include "dbisim/pomdp.hpp"
#include "dbisim/tableau.hpp"

namespace dbisim {

using Json = nlohmann::ordered_json;

/// Parse errors carry the line and column.
Json load_json(const std::filesystem::path& path);
Json parse_json(std::string_view text, const std::string& origin = "<input>");
void save_json(const std::filesystem::path& path, const Json& j);

Rational read_rational(const Json& j, const std::string& field);
Json rational_json(const Rational& r);

PA read_pa(const Json& j);
Json pa_json(const PA& pa);

/// `{ state: "p/q", ... }`, omitted states are 0.
Dist read_dist(const Json& j, const std::vector<std::string>& states, const std::string& field = "dist");
Json dist_json(const RatVector& p, const std::vector<std::string>& states);

/// Command-line form of a Dist object: "{t:1}", "{t':1/2, t'':1/2}" or JSON.
/// Each item splits at its last ':' so state names may contain colons.
Dist parse_inline_dist(std::string_view text, const std::vector<std::string>& states);

Json matrix_json(const PA& pa, const BisimMatrix& e);

CTMC read_ctmc(const Json& j);
Json ctmc_json(const CTMC& c);

SA read_sa(const Json& j);
Json sa_json(const SA& sa);

Json expolynomial_json(const Expolynomial& e);
Json fpa_json(const FinitePA& fpa);

Json tableau_json(const FinitePA& fpa, const Verdict& v);

POMDP read_pomdp(const Json& j);

}  // namespace dbisim
