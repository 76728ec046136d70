#include <thread>

#include <httplib.h>
#include <spdlog/spdlog.h>

#include "akg/error.hpp"
#include "akg/service.hpp"

namespace akg {

namespace {

void reply(httplib::Response& res, const Response& r) {
    res.status = r.status;
    res.set_content(r.body.dump(), "application/json");
}

template <typename Handler>
void with_json_body(const httplib::Request& req, httplib::Response& res, Handler&& handler) {
    nlohmann::json body;
    try {
        body = nlohmann::json::parse(req.body);
    } catch (const nlohmann::json::parse_error& e) {
        reply(res, {400, {{"error", std::string("request body is not JSON: ") + e.what()}}});
        return;
    }
    reply(res, handler(body));
}

}  // namespace

struct HttpFrontend::Impl {
    AkgService& service;
    httplib::Server server;
    std::jthread thread;

    explicit Impl(AkgService& s) : service(s) {
        server.Post("/tickets", [this](const httplib::Request& req, httplib::Response& res) {
            with_json_body(req, res, [this](const nlohmann::json& b) { return service.ticket(b); });
        });
        server.Post("/query", [this](const httplib::Request& req, httplib::Response& res) {
            with_json_body(req, res, [this](const nlohmann::json& b) { return service.query(b); });
        });
        server.Post("/feedback", [this](const httplib::Request& req, httplib::Response& res) {
            with_json_body(req, res, [this](const nlohmann::json& b) { return service.feedback(b); });
        });
        server.Get("/facets", [this](const httplib::Request& req, httplib::Response& res) {
            std::vector<std::string> filters;
            auto n = req.get_param_value_count("filter");
            for (std::size_t i = 0; i < n; ++i) filters.push_back(req.get_param_value("filter", i));
            reply(res, service.facets(filters));
        });
        server.Get("/lattice/summary",
                   [this](const httplib::Request&, httplib::Response& res) { reply(res, service.lattice_summary()); });
        server.Get("/health", [this](const httplib::Request&, httplib::Response& res) { reply(res, service.health()); });
        server.set_exception_handler([](const httplib::Request&, httplib::Response& res, std::exception_ptr ep) {
            std::string message = "internal error";
            try {
                std::rethrow_exception(ep);
            } catch (const std::exception& e) {
                message = e.what();
            } catch (...) {
            }
            spdlog::error("request failed: {}", message);
            res.status = 500;
            res.set_content(nlohmann::json{{"error", message}}.dump(), "application/json");
        });
    }
};

HttpFrontend::HttpFrontend(AkgService& service) : impl_(std::make_unique<Impl>(service)) {}

HttpFrontend::~HttpFrontend() { stop(); }

int HttpFrontend::bind(const std::string& host, int port) {
    int bound = port == 0 ? impl_->server.bind_to_any_port(host) : (impl_->server.bind_to_port(host, port) ? port : -1);
    if (bound < 0) throw Error(ErrorCode::io_error, "cannot bind " + host + ":" + std::to_string(port));
    return bound;
}

void HttpFrontend::run() { impl_->server.listen_after_bind(); }

void HttpFrontend::start() {
    impl_->thread = std::jthread([this] { impl_->server.listen_after_bind(); });
    impl_->server.wait_until_ready();
}

void HttpFrontend::stop() {
    if (!impl_) return;
    impl_->server.stop();
    if (impl_->thread.joinable()) impl_->thread.join();
}

}  // namespace akg
