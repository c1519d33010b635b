#pragma once

#include "kgraph/ctm.hpp"

namespace kgraph::test {

/// The checked-in (2,2), 100-step, d=4 table.
inline const CtmTable& default_table()
{
  static const CtmTable t = load_table(KGRAPH_DEFAULT_TABLE);
  return t;
}

} // namespace kgraph::test
