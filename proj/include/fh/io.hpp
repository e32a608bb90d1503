#pragma once

#include <string>

#include <json.hpp>

#include "fh/audit.hpp"
#include "fh/solvers.hpp"

namespace fh::io {

using Json = nlohmann::ordered_json;

// Rationals are text ("7/2"); plain JSON integers are accepted on input.
Json to_json(const Rational& q);
Rational rational_from(const Json& j);

Json to_json(const ObjectiveValue& v);
Json to_json(const ThreePartitionInstance& tp);
ThreePartitionInstance partition_instance_from(const Json& j);
Json to_json(const Partition& p);
Partition partition_from(const Json& j);
Json to_json(const Instance& inst);
Instance instance_from(const Json& j);
Json to_json(const Schedule& s);
Schedule schedule_from(const Json& j);
Json to_json(const ReductionParams& p);
Json to_json(const Threshold& t);
Json to_json(const CheckRecord& c);
Json to_json(const AuditReport& r);

// One line per check plus the counts.
std::string summary(const AuditReport& r);

Json read_json(const std::string& path);
// Writes to a sibling temporary file, then renames over `path`.
void write_atomic(const std::string& path, const std::string& content);
void write_json(const std::string& path, const Json& j);

}  // namespace fh::io
