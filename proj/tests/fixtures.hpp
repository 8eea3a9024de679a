#ifndef GREENDENS_TEST_FIXTURES_HPP
#define GREENDENS_TEST_FIXTURES_HPP

#include "greendens/datagen.hpp"
#include "greendens/density.hpp"

// Shared fitted model: 400-point 2-D standard Gaussian, small enough to fit
// in well under a second but large enough to behave like a real estimate.
inline const greendens::DensityModel& small_gauss_model() {
    static greendens::DensityModel m = [] {
        greendens::SampleSet s = greendens::sample_gaussian(2, 400, 1.0, 1234);
        greendens::FitConfig cfg;
        cfg.n_large_fit = 10;
        cfg.restarts = 0;
        cfg.max_iterations = 600;
        cfg.seed = 99;
        return greendens::DensityModel::fit(std::move(s), cfg);
    }();
    return m;
}

#endif
