#include "ingest/config_map.hpp"

#include <json.hpp>

#include <algorithm>
#include <cctype>
#include <sstream>

namespace cppa {

namespace {

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> lines_of(const std::string& text) {
    std::vector<std::string> out;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) out.push_back(trim(line));
    return out;
}

std::vector<std::string> words_of(const std::string& line) {
    std::vector<std::string> out;
    std::istringstream in(line);
    std::string w;
    while (in >> w) out.push_back(w);
    return out;
}

FieldSet ip_field(const std::string& spec) {
    auto set = parse_ip_set(spec);
    if (!set) throw ConfigMapError("cannot parse address or subnet '" + spec + "'");
    FieldSet fs;
    fs.kind = FieldKind::IpSet;
    fs.members = *set;
    return fs;
}

FieldSet port_field(std::uint16_t port) {
    FieldSet fs;
    fs.kind = FieldKind::PortSet;
    fs.members = IntervalSet::single(port);
    return fs;
}

FieldSet tcp_field() {
    FieldSet fs;
    fs.kind = FieldKind::ProtoSet;
    fs.members = IntervalSet::single(6);
    return fs;
}

} // namespace

std::string MappedPi::str() const {
    std::string c = coefficients.str();
    return "(" + source + ", " + destination + ", " + technology + ", " + c + ", " +
           selector.str() + ", [])";
}

CipherMap CipherMap::with_defaults() {
    CipherMap map;
    const CoefficientTriple strong{Rational(5), Rational(5), Rational(5)};
    // The AES-256 + SHA-512 class suites used by the shipped examples.
    map.add("aes256-sha512-modp2048", strong);
    map.add("aes256-sha512", strong);
    map.add("aes-256-cbc+sha-512", strong);
    map.add("aes-256-cbc+sha512", strong);
    map.add("aes256-cbc+hmac-sha2-512", strong);
    return map;
}

void CipherMap::add(const std::string& suite, const CoefficientTriple& coefficients) {
    table_[lower(suite)] = coefficients;
}

CoefficientTriple CipherMap::require(const std::string& suite) const {
    auto it = table_.find(lower(suite));
    if (it == table_.end())
        throw ConfigMapError("unmapped cipher suite '" + suite +
                             "': add it to the coefficient table");
    return it->second;
}

std::vector<MappedPi> map_strongswan(const std::string& conf_text, const MapContext& context) {
    struct Conn {
        std::string name;
        std::map<std::string, std::string> settings;
    };
    std::vector<Conn> conns;
    Conn* current = nullptr;
    for (const std::string& line : lines_of(conf_text)) {
        if (line.empty() || line[0] == '#') continue;
        const auto words = words_of(line);
        if (words.size() >= 1 && words[0] == "config") {
            current = nullptr;
            continue;
        }
        if (words[0] == "conn") {
            conns.push_back({words.size() > 1 ? words[1] : "", {}});
            current = &conns.back();
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos || !current) continue;
        current->settings[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
    }

    std::vector<MappedPi> out;
    for (const Conn& conn : conns) {
        if (conn.name.empty() || conn.name == "%default") continue; // defaults block
        auto get = [&](const char* key) -> std::string {
            auto it = conn.settings.find(key);
            return it == conn.settings.end() ? "" : it->second;
        };
        const std::string left = get("left");
        const std::string right = get("right");
        if (left.empty() || right.empty())
            throw ConfigMapError("conn " + conn.name + ": missing peer addresses (left/right)");
        if (left == right)
            throw ConfigMapError("conn " + conn.name + ": identical end-points");

        std::string cipher = get("esp");
        if (cipher.empty()) cipher = get("ike");
        if (cipher.empty())
            throw ConfigMapError("conn " + conn.name + ": no esp/ike cipher suite declared");

        MappedPi pi;
        pi.source = left;
        pi.destination = right;
        pi.technology = "IPsec";
        pi.coefficients = context.ciphers.require(cipher);

        const std::string leftsubnet = get("leftsubnet");
        const std::string rightsubnet = get("rightsubnet");
        if (!leftsubnet.empty() && !rightsubnet.empty()) {
            if (leftsubnet == rightsubnet)
                throw ConfigMapError("conn " + conn.name + ": identical peer subnets");
            pi.selector.ip_src = ip_field(leftsubnet);
            pi.selector.ip_dst = ip_field(rightsubnet);
        } else if (!rightsubnet.empty()) {
            pi.selector.ip_dst = ip_field(rightsubnet);
        } else if (!leftsubnet.empty()) {
            pi.selector.ip_src = ip_field(leftsubnet);
        }
        out.push_back(std::move(pi));
    }
    return out;
}

std::vector<MappedPi> map_openvpn(const std::string& client_text, const std::string& server_text,
                                  const MapContext& context) {
    if (trim(client_text).empty())
        throw ConfigMapError("OpenVPN mapping needs the client configuration (remote directive)");

    std::string remote_host;
    std::string cipher, auth;
    for (const std::string& line : lines_of(client_text)) {
        if (line.empty() || line[0] == '#' || line[0] == ';') continue;
        const auto words = words_of(line);
        if (words.empty()) continue;
        if (words[0] == "remote" && words.size() >= 2) remote_host = words.back();
        if (words[0] == "cipher" && words.size() >= 2) cipher = words[1];
        if (words[0] == "auth" && words.size() >= 2) auth = words[1];
    }
    if (remote_host.empty()) throw ConfigMapError("client configuration has no remote directive");
    if (cipher.empty()) throw ConfigMapError("client configuration has no cipher directive");

    // Optional cross-check against the server side.
    if (!trim(server_text).empty()) {
        for (const std::string& line : lines_of(server_text)) {
            const auto words = words_of(line);
            if (words.size() >= 2 && words[0] == "cipher" && lower(words[1]) != lower(cipher))
                throw ConfigMapError("client and server disagree on the cipher suite");
        }
    }

    std::string destination = remote_host;
    if (destination.find(':') == std::string::npos) destination += ":1194";

    MappedPi pi;
    pi.source = (context.client_address.empty() ? "client" : context.client_address) + ":*";
    pi.destination = destination;
    pi.technology = "TLS";
    pi.coefficients = context.ciphers.require(auth.empty() ? cipher : cipher + "+" + auth);
    return {pi};
}

std::vector<MappedPi> map_ssh(const std::string& conf_text, const MapContext& context) {
    struct Host {
        std::string alias;
        std::map<std::string, std::string> settings;
    };
    std::vector<Host> hosts;
    Host* current = nullptr;
    for (const std::string& line : lines_of(conf_text)) {
        if (line.empty() || line[0] == '#') continue;
        const auto words = words_of(line);
        if (words.empty()) continue;
        if (words[0] == "Host") {
            hosts.push_back({words.size() > 1 ? words[1] : "", {}});
            current = &hosts.back();
            continue;
        }
        if (!current) continue;
        std::string rest;
        for (std::size_t i = 1; i < words.size(); ++i) rest += (i > 1 ? " " : "") + words[i];
        current->settings[words[0]] = rest;
    }

    std::vector<MappedPi> out;
    for (const Host& host : hosts) {
        auto get = [&](const char* key) -> std::string {
            auto it = host.settings.find(key);
            return it == host.settings.end() ? "" : it->second;
        };
        const std::string hostname = get("HostName");
        if (hostname.empty())
            throw ConfigMapError("Host " + host.alias + ": missing HostName");
        const std::string port = get("Port").empty() ? "22" : get("Port");

        MappedPi pi;
        pi.source = (context.client_address.empty() ? "client" : context.client_address) + ":*";
        pi.destination = hostname + ":" + port;
        pi.technology = "SSH";

        std::string suite = get("Ciphers");
        if (!get("MACs").empty()) suite += "+" + get("MACs");
        if (suite.empty())
            throw ConfigMapError("Host " + host.alias + ": no Ciphers/MACs declared");
        pi.coefficients = context.ciphers.require(suite);

        const std::string forward = get("LocalForward");
        if (!forward.empty()) {
            // LocalForward [bind_address:]port host:hostport — the tunnel
            // carries TCP traffic from the bind end-point to the server,
            // which relays it to host:hostport.
            const auto words = words_of(forward);
            if (words.size() != 2)
                throw ConfigMapError("Host " + host.alias + ": malformed LocalForward");
            const auto bind_colon = words[0].rfind(':');
            const auto fwd_colon = words[1].rfind(':');
            if (fwd_colon == std::string::npos)
                throw ConfigMapError("Host " + host.alias + ": malformed LocalForward target");
            const std::string bind_addr =
                bind_colon == std::string::npos ? "" : words[0].substr(0, bind_colon);
            const std::string bind_port =
                bind_colon == std::string::npos ? words[0] : words[0].substr(bind_colon + 1);
            const std::string fwd_port = words[1].substr(fwd_colon + 1);

            if (!bind_addr.empty()) pi.selector.ip_src = ip_field(bind_addr);
            pi.selector.p_src = port_field(static_cast<std::uint16_t>(std::stoul(bind_port)));
            pi.selector.ip_dst = ip_field(hostname);
            pi.selector.p_dst = port_field(static_cast<std::uint16_t>(std::stoul(fwd_port)));
            pi.selector.prt = tcp_field();
        }
        out.push_back(std::move(pi));
    }
    return out;
}

std::string mapped_pis_to_json(const std::vector<MappedPi>& pis) {
    nlohmann::json doc;
    doc["schema_version"] = 1;
    nlohmann::json arr = nlohmann::json::array();
    for (const MappedPi& pi : pis) {
        nlohmann::json p;
        p["source"] = pi.source;
        p["destination"] = pi.destination;
        p["technology"] = pi.technology;
        nlohmann::json c = nlohmann::json::array();
        for (const Rational& r : pi.coefficients.components())
            c.push_back(r.den() == 1 ? nlohmann::json(r.num()) : nlohmann::json(r.str()));
        p["coefficients"] = c;
        p["selector"] = pi.selector.str();
        p["gateways"] = pi.gateways;
        arr.push_back(p);
    }
    doc["pis"] = arr;
    return doc.dump(2) + "\n";
}

} // namespace cppa
