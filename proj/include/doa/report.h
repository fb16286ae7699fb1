// Report assembly: one JSON document (schema doa-report/1) and a text
// rendering of a pipeline result.
#pragma once

#include <cstdint>
#include <string>

#include "doa/involution.h"
#include "json.hpp"

namespace doa {

struct ReportMeta {
  std::string spec_name;
  std::uint64_t rng_seed = 0;
  int trials = 0;
};

nlohmann::ordered_json report_json(const PipelineResult& res,
                                   const ReportMeta& meta);

std::string report_text(const PipelineResult& res, const ReportMeta& meta,
                        bool trace);

}  // namespace doa
