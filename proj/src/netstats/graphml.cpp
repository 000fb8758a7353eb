#include "geosent/netstats/graphml.hpp"

#include "geosent/core/error.hpp"

#include <boost/property_tree/ptree.hpp>
#include <boost/property_tree/xml_parser.hpp>

namespace geosent::netstats {

namespace {

std::string escape(std::string_view text) {
    std::string out;
    out.reserve(text.size());
    for (char c : text) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            case '\'': out += "&apos;"; break;
            default: out.push_back(c);
        }
    }
    return out;
}

}  // namespace

void write_graphml(std::ostream& out, const UserNetwork& network, const std::map<std::string, std::size_t>& community) {
    out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
        << "<graphml xmlns=\"http://graphml.graphdrawing.org/xmlns\">\n"
        << "  <key id=\"region\" for=\"node\" attr.name=\"region\" attr.type=\"string\"/>\n"
        << "  <key id=\"community\" for=\"node\" attr.name=\"community\" attr.type=\"long\"/>\n"
        << "  <key id=\"weight\" for=\"edge\" attr.name=\"weight\" attr.type=\"double\"/>\n"
        << "  <graph id=\"interactions\" edgedefault=\"directed\">\n";
    for (const auto& node : network.nodes) {
        out << "    <node id=\"" << escape(node) << "\">";
        if (const auto it = network.region.find(node); it != network.region.end() && it->second) {
            out << "<data key=\"region\">" << escape(*it->second) << "</data>";
        }
        if (const auto it = community.find(node); it != community.end()) {
            out << "<data key=\"community\">" << it->second << "</data>";
        }
        out << "</node>\n";
    }
    std::size_t edge_id = 0;
    for (const auto& [pair, weight] : network.edges) {
        out << "    <edge id=\"e" << edge_id++ << "\" source=\"" << escape(pair.first) << "\" target=\""
            << escape(pair.second) << "\"><data key=\"weight\">" << weight << "</data></edge>\n";
    }
    out << "  </graph>\n</graphml>\n";
}

GraphDocument read_graphml(std::istream& in) {
    namespace pt = boost::property_tree;
    pt::ptree tree;
    try {
        pt::read_xml(in, tree);
    } catch (const pt::xml_parser_error& e) {
        throw InputError(std::string("GraphML parse error: ") + e.what());
    }
    GraphDocument doc;
    const auto graphml = tree.get_child_optional("graphml");
    if (!graphml) throw InputError("not a GraphML document");
    const auto graph = graphml->get_child_optional("graph");
    if (!graph) return doc;
    for (const auto& [tag, element] : *graph) {
        if (tag == "node") {
            GraphNode node;
            node.id = element.get<std::string>("<xmlattr>.id");
            for (const auto& [child_tag, child] : element) {
                if (child_tag != "data") continue;
                const auto key = child.get<std::string>("<xmlattr>.key");
                if (key == "region") node.region = child.get_value<std::string>();
                if (key == "community") node.community = child.get_value<long long>();
            }
            doc.nodes.push_back(std::move(node));
        } else if (tag == "edge") {
            GraphEdge edge;
            edge.source = element.get<std::string>("<xmlattr>.source");
            edge.target = element.get<std::string>("<xmlattr>.target");
            for (const auto& [child_tag, child] : element) {
                if (child_tag == "data" && child.get<std::string>("<xmlattr>.key") == "weight") {
                    edge.weight = child.get_value<double>();
                }
            }
            doc.edges.push_back(std::move(edge));
        }
    }
    return doc;
}

}  // namespace geosent::netstats
