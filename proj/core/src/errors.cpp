#include "aeropipe/errors.hpp"

namespace aeropipe {

SaturationError::SaturationError(int channel, double counts)
    : Error("ADC saturated on channel " + std::to_string(channel) + " (counts=" +
            std::to_string(counts) + ")"),
      channel_(channel) {}

}  // namespace aeropipe
