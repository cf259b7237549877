// Variable tables that connect a solved encoding back to Knuth-Bendix
// parameters: which solver variables carry the weight bits, the w0 bits and
// the precedence code bits. Bit id lists are most significant first.

#pragma once

#include <map>
#include <string>
#include <vector>

namespace kbo {

enum class EngineKind { sat, pbc };

struct DecodeTables {
  EngineKind engine = EngineKind::sat;
  int weight_width = 0;  // k
  int code_width = 0;    // l
  std::vector<int> w0_bits;
  std::map<std::string, std::vector<int>> symbol_weight_bits;
  std::map<std::string, std::vector<int>> symbol_code_bits;
};

}  // namespace kbo
