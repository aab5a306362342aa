#pragma once

// Built-in channel realizations used by the reproduction experiments, so
// nothing external is needed to rerun them.

#include <cmath>
#include <string>

#include "crcoop/errors.hpp"
#include "crcoop/model.hpp"

namespace crcoop {

struct Preset {
    std::string name;
    SystemConfig cfg;
    ChannelSet ch;
};

inline Preset make_preset(const std::string& name) {
    Preset p;
    p.name = name;
    if (name == "fig2") {
        // N = 3 illustration for the ideal scheme; SINR target 5.
        p.cfg = SystemConfig{10.0, 10.0, 0.8, 1.0, 1.0, std::log2(6.0), 1000.0, 3};
        p.ch.h_p = {-0.4692, 0.8665};
        p.ch.h_s = {{-0.0823, 1.3427}, {-0.6438, -0.4291}, {0.4338, -0.2197}};
        p.ch.h_sp = {{0.5345, -0.8716}, {0.2872, -0.4043}, {0.0951, -0.3264}};
        p.ch.g = {{0.0, 0.0}, {0.0, 0.0}, {0.0, 0.0}};  // unused by the ideal scheme
        return p;
    }
    if (name == "fig5") {
        // N = 3 power-splitting illustration; P_p = 10 dB, P_s0 = 0 dB,
        // r_p = 2.6. eta is not pinned by this setting; 0.5 matches fig6.
        p.cfg = SystemConfig{10.0, 1.0, 0.5, 1.0, 1.0, 2.6, 1000.0, 3};
        p.ch.h_p = {std::sqrt(0.0127), 0.0};
        p.ch.g = {{0.8113, -1.5579}, {0.4228, -0.4039}, {-0.9060, 0.1513}};
        p.ch.h_s = {{0.6664, 0.2165}, {0.0663, -0.8290}, {-0.7936, -0.6795}};
        p.ch.h_sp = {{-0.4623, -0.6364}, {-0.8693, -0.2020}, {-0.1916, -0.3270}};
        return p;
    }
    if (name == "fig6") {
        // N = 4 rate-region channel; P_p = 20 dB, P_s0 = 10 dB, eta = 0.5.
        p.cfg = SystemConfig{100.0, 10.0, 0.5, 1.0, 1.0, 3.0, 1000.0, 4};
        p.ch.h_p = {std::sqrt(0.0002), 0.0};
        p.ch.g = {{-0.9472, -0.6334}, {-0.9090, -1.2266}, {-1.1855, 0.3370}, {0.5345, -0.1796}};
        p.ch.h_s = {{-0.9215, -0.4314}, {0.2052, -0.2503}, {0.3109, -0.3055}, {0.3560, 0.1163}};
        p.ch.h_sp = {{0.3610, -0.1248}, {1.1616, 0.8211}, {-0.4350, -0.2818}, {-0.4445, 0.6564}};
        return p;
    }
    throw config_error("unknown preset '" + name + "' (expected fig2, fig5 or fig6)");
}

}  // namespace crcoop
