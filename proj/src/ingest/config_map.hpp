#pragma once

#include "core/coefficients.hpp"
#include "core/selector.hpp"

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace cppa {

/// PI extracted from a security-control configuration excerpt. End-points
/// are kept in address form ("192.168.0.1", "192.168.1.100:*",
/// "192.168.1.1:1194") exactly as the configurations name them; turning them
/// into scenario entities is the caller's concern.
struct MappedPi {
    std::string source;
    std::string destination;
    std::string technology;
    CoefficientTriple coefficients;
    Selector selector;
    std::vector<std::string> gateways; // always empty for these mappers

    std::string str() const;
};

struct ConfigMapError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Cipher-suite string -> coefficient triple. Lookups are case-insensitive.
/// There is deliberately no silent default: unmapped suites raise
/// ConfigMapError so weak ciphers never masquerade as strong ones.
class CipherMap {
public:
    static CipherMap with_defaults();

    void add(const std::string& suite, const CoefficientTriple& coefficients);
    CoefficientTriple require(const std::string& suite) const;

private:
    std::map<std::string, CoefficientTriple> table_;
};

struct MapContext {
    CipherMap ciphers = CipherMap::with_defaults();
    std::string client_address; // OpenVPN/SSH client address (not in the files)
};

/// strongSwan ipsec.conf subset: conn blocks with left/right and the
/// optional leftsubnet/rightsubnet. End-to-end, site-to-site and
/// remote-access conn shapes map to one PI each.
std::vector<MappedPi> map_strongswan(const std::string& conf_text, const MapContext& context);

/// OpenVPN 2.0 client (plus optional server) configuration: one TLS tunnel
/// PI from the context's client address to the remote host:port.
std::vector<MappedPi> map_openvpn(const std::string& client_text, const std::string& server_text,
                                  const MapContext& context);

/// OpenSSH client configuration: one SSH PI per Host block, the selector
/// derived from the LocalForward specification when present.
std::vector<MappedPi> map_ssh(const std::string& conf_text, const MapContext& context);

std::string mapped_pis_to_json(const std::vector<MappedPi>& pis);

} // namespace cppa
