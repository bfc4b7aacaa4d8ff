#ifndef FPGAME_SERIALIZE_HPP
#define FPGAME_SERIALIZE_HPP

#include <string>
#include <variant>

#include "fpgame/core.hpp"
#include "fpgame/games.hpp"

namespace fpg {

/// Shortest text with 17 significant digits; round-trips exactly.
std::string fmt17(double x);

using AnyPrior = std::variant<FiniteSpectrumPrior, ContinuousPrior>;

// Writers emit fields in the documented order with fmt17 floats, so equal
// inputs produce byte-identical artifacts.
std::string to_json(const CollusionChannel& c);
std::string to_json(const FiniteSpectrumPrior& p);
std::string to_json(const ContinuousPrior& p);
std::string to_json(const AnyPrior& p);
std::string to_json(const BoundsReport& r);
std::string to_json(const KktReport& r);
std::string to_json(const GameSolution& s);

CollusionChannel channel_from_json(const std::string& text);
AnyPrior prior_from_json(const std::string& text);

/// Prior grammar: arcsine | beta:<float> | point:<float> | @<path to JSON>.
/// Errors carry the failing position / constraint name.
AnyPrior parse_prior(const std::string& spec);

}  // namespace fpg

#endif
