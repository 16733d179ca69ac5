#pragma once

#include <cstdint>
#include <string>

#include <json.hpp>

#include "rcm/corrector.hpp"
#include "rcm/diagnostics.hpp"
#include "rcm/environment.hpp"
#include "rcm/exponents.hpp"
#include "rcm/kernel.hpp"
#include "rcm/llt.hpp"
#include "rcm/walk.hpp"

namespace rcm {

using json = nlohmann::json;

// FNV-1a 64, hex; environment ids and manifest hashes
std::string hash_hex(const std::string& bytes);
std::string hash_file_hex(const std::string& path);

// write via temp file + rename so readers never see partial artifacts
void atomic_write(const std::string& path, const std::string& content);

std::string format_double(double v);  // %.17g, used by the CSV writers

json to_json(const AssumptionReport& r);
json to_json(const InequalityReport& r);
json to_json(const OndiagReport& r);
json to_json(const SublinearityReport& r);
json to_json(const HolderReport& r);
json to_json(const LltErrorCurve& c);
json to_json(const EmpiricalKernel& k, const Box& box);
json moment_summary_json(const MomentProfile& mp);
json diffusion_json(const DiffusionMatrix& m, const CorrectorField& chi);

std::string llt_curve_csv(const LltErrorCurve& c);
std::string llt_long_csv(const std::vector<LltPointRecord>& rows, int d);
std::string endpoints_csv(const ScaledEndpoints& pts, int d);
std::string field_csv(const LatticeField& f);
std::string corrector_jsonl(const Environment& env, const CorrectorField& chi);

}  // namespace rcm
