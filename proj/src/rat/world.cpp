#include "v2x/rat/world.hpp"

namespace v2x {

namespace {

McsTable load_table(const Scenario& sc)
{
    return sc.phy.mcs_table.empty() ? McsTable::lte_default() : load_mcs_table_file(sc.phy.mcs_table);
}

std::vector<Ue> initial_drop(const Scenario& sc, const MadridGrid& grid, std::uint64_t master)
{
    RngStream rng(master, "drop");
    return drop_vehicles(grid, sc.density, rng, sc.mobility.max_speed_kmh, sc.radio.ue_height);
}

} // namespace

World::World(const Scenario& scenario, std::uint64_t master_seed)
    : sc(scenario), master(master_seed),
      grid(build_grid(scenario.grid.blocks_x, scenario.grid.blocks_y, scenario.grid)),
      site(make_site(grid, scenario.radio.bs_height)), ues(initial_drop(scenario, grid, master_seed)),
      mobility_rng(master_seed, "mobility"), channel(scenario, grid, site, master_seed), mcs(load_table(scenario)),
      bler{scenario.phy.bler_model == BlerModel::Step ? BlerKind::Step : BlerKind::Curve, scenario.phy.bler_slope},
      bler_seed(derive_seed(master_seed, "bler"))
{
    channel.refresh(ues);
    for (auto& ue : ues)
        ue.serving_sector = channel.best_sector(ue.id);
}

double World::decode_draw(std::uint64_t leg, std::int64_t packet, std::int64_t rx, std::int64_t attempt) const
{
    return hashed_uniform(bler_seed, leg, static_cast<std::uint64_t>(packet),
                          (static_cast<std::uint64_t>(rx) << 24) ^ static_cast<std::uint64_t>(attempt));
}

void World::attach_trace(ResourceGrid& g)
{
    if (sc.trace)
        g.set_trace([this](const TraceRow& row) { log.trace.push_back(row); });
}

void World::move(std::int64_t dt_ms)
{
    step_mobility(ues, dt_ms, grid, mobility_rng);
    channel.refresh(ues);
    for (auto& ue : ues)
        ue.serving_sector = channel.best_sector(ue.id);
}

} // namespace v2x
