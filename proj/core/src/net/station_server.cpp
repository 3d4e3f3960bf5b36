#include "pht/net/station_server.hpp"

#include <httplib.h>

#include <thread>

namespace pht::net {

namespace {

void reply_json(httplib::Response& res, const nlohmann::json& body, int status = 200) {
    res.status = status;
    res.set_content(body.dump(), "application/json");
}

void reply_error(httplib::Response& res, int status, const std::string& message) {
    reply_json(res, {{"error", message}}, status);
}

template <typename Fn>
void guarded(httplib::Response& res, Fn&& fn) {
    try {
        fn();
    } catch (const NotFoundError& e) {
        reply_error(res, 404, e.what());
    } catch (const Error& e) {
        reply_error(res, 400, e.what());
    }
}

} // namespace

struct StationServer::Impl {
    const fhir::StationStore& store;
    fhir::ObjectStore& objects;
    httplib::Server server;
    std::thread thread;
    int port = 0;

    Impl(const fhir::StationStore& s, fhir::ObjectStore& o) : store(s), objects(o) {
        server.Get("/Patient", [this](const httplib::Request& req, httplib::Response& res) {
            guarded(res, [&] {
                if (!req.has_param("study")) {
                    throw ConfigError("GET /Patient requires a study query parameter");
                }
                nlohmann::json out = nlohmann::json::array();
                for (const auto& id : store.patients_of_study(req.get_param_value("study"))) {
                    out.push_back(store.patient(id).to_json());
                }
                reply_json(res, out);
            });
        });
        server.Get(R"(/Patient/(.+))", [this](const httplib::Request& req, httplib::Response& res) {
            guarded(res, [&] { reply_json(res, store.patient(req.matches[1]).to_json()); });
        });
        server.Get(R"(/Media/(.+))", [this](const httplib::Request& req, httplib::Response& res) {
            guarded(res, [&] { reply_json(res, store.media(req.matches[1]).to_json()); });
        });
        server.Get(R"(/ImageStudy/(.+))", [this](const httplib::Request& req, httplib::Response& res) {
            guarded(res, [&] { reply_json(res, store.study(req.matches[1]).to_json()); });
        });
        server.Get(R"(/objects/(.+))", [this](const httplib::Request& req, httplib::Response& res) {
            guarded(res, [&] {
                const auto blob = objects.get(req.matches[1]);
                res.set_content(reinterpret_cast<const char*>(blob.data()), blob.size(),
                                "application/octet-stream");
            });
        });
        server.Put(R"(/objects/(.+))", [this](const httplib::Request& req, httplib::Response& res) {
            guarded(res, [&] {
                objects.put(req.matches[1],
                            std::vector<std::uint8_t>(req.body.begin(), req.body.end()));
                reply_json(res, {{"stored", std::string(req.matches[1])}}, 201);
            });
        });
    }
};

StationServer::StationServer(const fhir::StationStore& store, fhir::ObjectStore& objects)
    : impl_(std::make_unique<Impl>(store, objects)) {}

StationServer::~StationServer() { stop(); }

int StationServer::start() {
    impl_->port = impl_->server.bind_to_any_port("127.0.0.1");
    if (impl_->port <= 0) throw DataError("station server failed to bind a port");
    impl_->thread = std::thread([this] { impl_->server.listen_after_bind(); });
    impl_->server.wait_until_ready();
    return impl_->port;
}

void StationServer::stop() {
    if (impl_ && impl_->thread.joinable()) {
        impl_->server.stop();
        impl_->thread.join();
    }
}

} // namespace pht::net
