#include "rcplan/world.hpp"

#include <cmath>
#include <fstream>
#include <istream>

#include <json.hpp>

namespace rcplan {

double cell_distance(Cell a, Cell b) {
    const double di = a.i - b.i;
    const double dj = a.j - b.j;
    return std::sqrt(di * di + dj * dj);
}

GridWorld load_world(std::istream& is) {
    nlohmann::json j;
    try {
        is >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("map file is not valid JSON: ") + e.what());
    }
    GridWorld w;
    w.width = j.at("width").get<int>();
    w.height = j.at("height").get<int>();
    if (w.width <= 0 || w.height <= 0) throw ConfigError("map dimensions must be positive");
    w.ap_names = j.at("atomic_props").get<std::vector<std::string>>();
    ApSet aps(w.ap_names);  // validates nonempty/unique
    w.labels.assign(w.num_cells(), 0);

    auto read_cell = [&](const nlohmann::json& jc) {
        Cell c{jc.at(0).get<int>(), jc.at(1).get<int>()};
        if (!w.in_bounds(c))
            throw ConfigError("cell [" + std::to_string(c.i) + "," + std::to_string(c.j) +
                              "] out of bounds");
        return c;
    };

    for (const auto& jc : j.value("cells", nlohmann::json::array())) {
        Cell c = read_cell(jc.at("pos"));
        std::uint32_t mask = 0;
        for (const auto& name : jc.at("labels")) {
            int i = aps.index(name.get<std::string>());
            if (i < 0) throw ConfigError("label not in atomic_props: " + name.get<std::string>());
            mask |= 1u << i;
        }
        w.labels[w.index(c)] = mask;
    }
    w.rover_start = read_cell(j.at("rover_start"));
    w.copter_start = read_cell(j.at("copter_start"));
    for (const auto& jp : j.value("priors", nlohmann::json::array())) {
        GridWorld::Prior p;
        p.pos = read_cell(jp.at("pos"));
        p.ap = aps.index(jp.at("prop").get<std::string>());
        if (p.ap < 0) throw ConfigError("prior prop not in atomic_props");
        p.value = jp.at("value").get<double>();
        if (p.value < 0.0 || p.value > 1.0) throw ConfigError("prior value outside [0,1]");
        w.priors.push_back(p);
    }
    return w;
}

GridWorld load_world_file(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw ConfigError("cannot open map file: " + path);
    return load_world(is);
}

BeliefMap::BeliefMap(int num_cells, int num_aps, double init)
    : num_cells_(num_cells), num_aps_(num_aps),
      values_(static_cast<std::size_t>(num_cells) * num_aps, init) {}

BeliefMap BeliefMap::from_world(const GridWorld& world, double init) {
    BeliefMap b(world.num_cells(), world.num_aps(), init);
    for (const auto& p : world.priors) b.set(world.index(p.pos), p.ap, p.value);
    return b;
}

const SensorModel::Prop* SensorModel::find(int ap) const {
    for (const auto& p : props)
        if (p.ap == ap) return &p;
    return nullptr;
}

void validate_sensor_coverage(const SensorModel& rover, const SensorModel& copter,
                              int num_aps) {
    for (int ap = 0; ap < num_aps; ++ap)
        if (!rover.observes(ap) && !copter.observes(ap))
            throw ConfigError("atomic proposition index " + std::to_string(ap) +
                              " is observed by neither rover nor copter");
}

double beta(const SensorModel& sensor, Cell x, Cell x2, int ap) {
    const SensorModel::Prop* p = sensor.find(ap);
    if (!p)
        throw std::invalid_argument("sensor of " + sensor.owner +
                                    " does not observe prop index " + std::to_string(ap));
    const double d = cell_distance(x, x2);
    if (p->range == 0.0) return x == x2 ? p->magnitude + 0.5 : 0.5;
    if (d > p->range) return 0.5;
    const double r2 = p->range * p->range;
    const double t = d * d - r2;
    return p->magnitude / (r2 * r2) * t * t + 0.5;
}

int observe(const SensorModel& sensor, Rng& rng, Cell x, Cell x2, int ap,
            const GridWorld& world) {
    const SensorModel::Prop* p = sensor.find(ap);
    if (!p)
        throw std::invalid_argument("sensor of " + sensor.owner +
                                    " does not observe prop index " + std::to_string(ap));
    if (cell_distance(x, x2) > p->range)
        throw std::out_of_range("observation target outside sensor range");
    const double prec = beta(sensor, x, x2, ap);
    const bool truth = world.has_label(x2, ap);
    const bool correct = rng.bernoulli(prec);
    return (truth == correct) ? 1 : 0;
}

double bayes_update(BeliefMap& beliefs, int cell, int ap, int z, double b_precision) {
    const double b = beliefs.get(cell, ap);
    const double like1 = z ? b_precision : 1.0 - b_precision;   // Pr[z | ap holds]
    const double like0 = z ? 1.0 - b_precision : b_precision;   // Pr[z | ap fails]
    const double denom = like1 * b + like0 * (1.0 - b);
    if (denom == 0.0) {
        // certain prior contradicted by noise-free evidence; keep the prior
        beliefs.count_degenerate_event();
        return b;
    }
    const double post = like1 * b / denom;
    beliefs.set(cell, ap, post);
    return post;
}

int sweep_and_update(const SensorModel& sensor, Rng& rng, BeliefMap& beliefs,
                     const GridWorld& world, Cell x, std::vector<Observation>* log) {
    int count = 0;
    for (int idx = 0; idx < world.num_cells(); ++idx) {
        const Cell x2 = world.cell(idx);
        for (const auto& p : sensor.props) {
            if (cell_distance(x, x2) > p.range) continue;
            const int z = observe(sensor, rng, x, x2, p.ap, world);
            const double prec = beta(sensor, x, x2, p.ap);
            const double after = bayes_update(beliefs, idx, p.ap, z, prec);
            if (log) log->push_back({idx, p.ap, z, after});
            ++count;
        }
    }
    return count;
}

}  // namespace rcplan
