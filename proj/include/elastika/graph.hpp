#pragma once

#include "elastika/ir.hpp"

#include <set>
#include <string>
#include <vector>

namespace elastika
{

class TooManyCycles : public Error
{
public:
  using Error::Error;
};

/*! \brief Back-edges of the component graph.
 *
 * Depth-first search ignoring component kinds, rooted first at the
 * consumers of external inputs, then at Initial components, then at any
 * unvisited component, all in ascending id order. Successors are visited
 * in output-port order. Every directed cycle contains a returned link.
 */
std::set<std::string> find_back_edges( Network const& net );

/// Component-level successor links of `comp` (internal links only, port order).
std::vector<Link const*> out_links( Network const& net, std::string const& comp );
std::vector<Link const*> in_links( Network const& net, std::string const& comp );

/*! \brief Link-level successors following port dependencies.
 *
 * From a link entering a component, the links leaving the outputs that
 * depend on that input. Variables keep their read and write pairs apart;
 * Buffers are included as ordinary pass-through stages unless
 * `cut_buffers` is set.
 */
std::vector<std::string> next_links( Network const& net, Link const& l, bool cut_buffers );

/// Elementary cycles of the port-level graph as ordered link-id lists.
std::vector<std::vector<std::string>> enumerate_cycles( Network const& net, std::size_t limit );

/// Links on some buffer-free cycle of the port-level graph (Initial counts as a wire).
std::vector<std::string> combinational_cycle( Network const& net );

/// Producer component of a link looking through Buffers; empty if external.
std::string producer_through_buffers( Network const& net, Link const& l );
/// Consumer endpoint of a link looking through Buffers; external if none.
Endpoint consumer_through_buffers( Network const& net, Link const& l );

} // namespace elastika
