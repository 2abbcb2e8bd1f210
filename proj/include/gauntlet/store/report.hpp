#pragma once

#include <string>
#include <string_view>

#include "gauntlet/store/run.hpp"

namespace gauntlet::store {

enum class ReportFormat { Json, Markdown };

ReportFormat report_format_from(std::string_view s);

/// Renders a pipeline report body. The JSON form is {pipeline, status, report}
/// and carries no run id or timestamp, so identical inputs give identical
/// bytes. The markdown form shows every value spelled exactly as in the JSON
/// and opens with a PARTIAL banner unless the run completed.
std::string emit_report(const RunRecord& record, const json& body, ReportFormat format);

}  // namespace gauntlet::store
