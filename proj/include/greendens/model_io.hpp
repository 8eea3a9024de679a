#ifndef GREENDENS_MODEL_IO_HPP
#define GREENDENS_MODEL_IO_HPP

#include "greendens/classifier.hpp"
#include "greendens/density.hpp"

#include <string>

namespace greendens {

// Versioned JSON documents. All reals are written with round-trip precision,
// so save/load reproduces every double bit-exactly; loading re-validates the
// sample and field invariants.

std::string model_to_string(const DensityModel& m);
DensityModel model_from_string(const std::string& text);
void save_model(const DensityModel& m, const std::string& path);
DensityModel load_model(const std::string& path);

std::string classifier_to_string(const LikelihoodModel& m);
LikelihoodModel classifier_from_string(const std::string& text);
void save_classifier(const LikelihoodModel& m, const std::string& path);
LikelihoodModel load_classifier(const std::string& path);

} // namespace greendens

#endif
