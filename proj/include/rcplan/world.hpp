#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "rcplan/formula.hpp"
#include "rcplan/rng.hpp"

namespace rcplan {

class ConfigError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

struct Cell {
    int i = 0;
    int j = 0;
};

inline bool operator==(Cell a, Cell b) { return a.i == b.i && a.j == b.j; }

double cell_distance(Cell a, Cell b);

// Ground-truth grid: cell set, true labeling (hidden from the agents during
// a run), start positions and optional belief priors.
struct GridWorld {
    int width = 0;
    int height = 0;
    std::vector<std::string> ap_names;
    std::vector<std::uint32_t> labels;  // bitmask per cell, index = j*width + i
    Cell rover_start;
    Cell copter_start;
    struct Prior {
        Cell pos;
        int ap = 0;
        double value = 0.5;
    };
    std::vector<Prior> priors;

    int num_cells() const { return width * height; }
    int num_aps() const { return static_cast<int>(ap_names.size()); }
    int index(Cell c) const { return c.j * width + c.i; }
    Cell cell(int idx) const { return {idx % width, idx / width}; }
    bool in_bounds(Cell c) const {
        return c.i >= 0 && c.i < width && c.j >= 0 && c.j < height;
    }
    std::uint32_t label(Cell c) const { return labels[index(c)]; }
    bool has_label(Cell c, int ap) const { return (label(c) >> ap) & 1u; }

    ApSet ap_set() const { return ApSet(ap_names); }
};

GridWorld load_world(std::istream& is);
GridWorld load_world_file(const std::string& path);

// Posterior B(x |= ap) per (cell, ap).  The complement belief is always
// 1 - B and never stored.  Values 0/1 are absorbing under the Bayes
// quotient; degenerate-evidence collisions (beta == 1 against a certain
// prior of the opposite sign) leave the prior unchanged and are counted.
class BeliefMap {
  public:
    BeliefMap(int num_cells, int num_aps, double init = 0.5);
    static BeliefMap from_world(const GridWorld& world, double init = 0.5);

    double get(int cell, int ap) const { return values_[cell * num_aps_ + ap]; }
    void set(int cell, int ap, double v) { values_[cell * num_aps_ + ap] = v; }
    int num_cells() const { return num_cells_; }
    int num_aps() const { return num_aps_; }
    long degenerate_events() const { return degenerate_events_; }
    void count_degenerate_event() { ++degenerate_events_; }
    const std::vector<double>& raw() const { return values_; }

  private:
    int num_cells_;
    int num_aps_;
    std::vector<double> values_;
    long degenerate_events_ = 0;
};

// Bernoulli sensor: symmetric precision beta decaying with distance by a
// fourth-order polynomial profile; range 0 means own-cell sensing only.
struct SensorModel {
    struct Prop {
        int ap = 0;
        double range = 0.0;      // cell-distance units
        double magnitude = 0.5;  // in (0, 0.5]
    };
    std::string owner;  // "rover" | "copter"
    std::vector<Prop> props;

    const Prop* find(int ap) const;
    bool observes(int ap) const { return find(ap) != nullptr; }
};

// Checks AP_rover u AP_copter == AP.
void validate_sensor_coverage(const SensorModel& rover, const SensorModel& copter,
                              int num_aps);

// Sensor precision at distance ||x - x2||.
double beta(const SensorModel& sensor, Cell x, Cell x2, int ap);

// One Bernoulli draw: correct with probability beta.
int observe(const SensorModel& sensor, Rng& rng, Cell x, Cell x2, int ap,
            const GridWorld& world);

// Posterior after observing z with precision b_precision; writes back.
double bayes_update(BeliefMap& beliefs, int cell, int ap, int z, double b_precision);

struct Observation {
    int cell = 0;
    int ap = 0;
    int z = 0;
    double belief_after = 0.0;
};

// Observes every (cell, ap) pair within sensor range of x and applies the
// Bayes update.  Row-major over cells, then AP order (determinism contract).
int sweep_and_update(const SensorModel& sensor, Rng& rng, BeliefMap& beliefs,
                     const GridWorld& world, Cell x,
                     std::vector<Observation>* log = nullptr);

}  // namespace rcplan
