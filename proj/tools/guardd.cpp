#include <signal.h>
#include <unistd.h>

#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "guard/admin/admin_store.hpp"
#include "guard/net/config.hpp"
#include "guard/net/server.hpp"
#include "tool_io.hpp"

namespace {

int fail(const std::string& msg, int code) {
    std::cerr << "guardd: " << msg << "\n";
    return code;
}

// stable token first, so scripts can match on it
int fail(const guard::Error& e, int code) {
    return fail(std::string(guard::errc_token(e.code)) + ": " + e.message, code);
}

int run_init(const guard::net::ServerConfig& cfg, const std::string& password_file) {
    std::string password;
    if (!password_file.empty()) {
        auto line = guard::tool::read_first_line(password_file);
        if (!line.ok()) return fail(line.error(), 1);
        password = line.value();
    } else {
        password = guard::tool::prompt_secret("Admin password: ");
        if (::isatty(STDIN_FILENO) == 1) {
            const std::string again = guard::tool::prompt_secret("Retype password: ");
            if (again != password) return fail("passwords do not match", 1);
        }
    }
    auto store = guard::admin::AdminStore::initialize(cfg.state_dir, password);
    if (!store.ok()) return fail(store.error(), 1);
    std::cout << "initialized " << cfg.state_dir.string() << "\n";
    return 0;
}

int run_reset_password(const guard::net::ServerConfig& cfg) {
    auto store = guard::admin::AdminStore::open(cfg.state_dir);
    if (!store.ok()) return fail(store.error(), 1);
    const auto notify = guard::admin::outbox_notifier(
        cfg.outbox_dir.value_or(cfg.state_dir / "outbox"), "security-officer");
    auto password = store.value()->reset_password(notify);
    if (!password.ok()) return fail(password.error(), 1);
    // console is the delivery channel: print the password, nothing else,
    // so operators can capture it
    std::cout << password.value() << "\n";
    return 0;
}

int run_server(const guard::net::ServerConfig& cfg) {
    // worker threads inherit this mask; only the main thread sees the
    // shutdown signals, via sigwait
    sigset_t mask;
    sigemptyset(&mask);
    sigaddset(&mask, SIGINT);
    sigaddset(&mask, SIGTERM);
    sigaddset(&mask, SIGPIPE);
    pthread_sigmask(SIG_BLOCK, &mask, nullptr);

    auto server = guard::net::Server::start(cfg);
    if (!server.ok()) return fail(server.error(), 1);

    std::cout << "LISTENING data=" << server.value()->data_port()
              << " admin=" << server.value()->admin_port() << std::endl;

    for (;;) {
        int sig = 0;
        if (sigwait(&mask, &sig) != 0) continue;
        if (sig == SIGINT || sig == SIGTERM) break;
    }
    server.value()->stop();
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"SQL protection proxy"};
    std::string config_path;
    std::string password_file;
    bool init = false;
    bool reset_password = false;
    app.add_option("--config", config_path, "path to the server config file")->required();
    app.add_flag("--init", init, "create the protection state and exit");
    app.add_flag("--reset-password", reset_password,
                 "issue a fresh admin password, print it, and exit");
    app.add_option("--password-file", password_file,
                   "file whose first line is the admin password (with --init)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }
    if (init && reset_password) {
        return fail("--init and --reset-password are mutually exclusive", 2);
    }

    auto cfg = guard::net::load_config(config_path);
    if (!cfg.ok()) return fail(cfg.error(), 2);

    if (init) return run_init(cfg.value(), password_file);
    if (reset_password) return run_reset_password(cfg.value());
    return run_server(cfg.value());
}
