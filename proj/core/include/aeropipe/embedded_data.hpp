#pragma once

#include <string_view>

/// Copies of the checked-in data files under core/data, compiled in.
namespace aeropipe::embedded {

std::string_view cpcb_breakpoints_csv();
std::string_view pollutant_groups_ini();
std::string_view defaults_ini();

}  // namespace aeropipe::embedded
