#pragma once

#include <memory>

#include "pht/fhir/store.hpp"

namespace pht::net {

// HTTP binding of the station's resource and object APIs:
//   GET /Patient/{id}           GET /Patient?study={id}
//   GET /Media/{id}             GET /ImageStudy/{id}
//   GET /objects/{key}          PUT /objects/{key}
// JSON bodies for resources, raw octets for blobs.
class StationServer {
public:
    StationServer(const fhir::StationStore& store, fhir::ObjectStore& objects);
    ~StationServer();

    StationServer(const StationServer&) = delete;
    StationServer& operator=(const StationServer&) = delete;

    // Binds 127.0.0.1 on a free port, serves from a background thread and
    // returns the port.
    int start();
    void stop();

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

} // namespace pht::net
