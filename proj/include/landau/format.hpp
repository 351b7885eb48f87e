#pragma once

#include <string>

namespace landau {

// Round-trippable, locale-independent rendering used by every CSV writer.
std::string fmt_double(double x);
// Short form for column names, e.g. 1.5 -> "1.5", 4.5 -> "4.5".
std::string fmt_short(double x);

} // namespace landau
