#pragma once

#include "elastika/ir.hpp"

#include <nlohmann/json.hpp>

#include <set>
#include <string>

namespace elastika
{

nlohmann::ordered_json to_json( Network const& net );
Network network_from_json( nlohmann::json const& j );

/// Canonical netlist text: fixed key order, components and links sorted by id.
std::string write_netlist( Network const& net );
Network read_netlist( std::string const& text );

Network load_netlist( std::string const& path );
void save_netlist( Network const& net, std::string const& path );

/// Graphviz rendering; `highlight` links are drawn bold (e.g. a buffer plan).
std::string to_dot( Network const& net, std::set<std::string> const& highlight = {} );

std::string read_file( std::string const& path );
void write_file( std::string const& path, std::string const& text );

} // namespace elastika
