#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "guard/net/client.hpp"
#include "tool_io.hpp"

namespace {

int fail(const std::string& msg) {
    std::cerr << "guardctl: " << msg << "\n";
    return 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"control client for the SQL protection proxy"};
    app.require_subcommand(1);

    std::string host = "127.0.0.1";
    int port = 0;
    std::string password_file;
    app.add_option("--host", host, "proxy host");
    app.add_option("--port", port, "admin port")->required();
    app.add_option("--password-file", password_file,
                   "file whose first line is the admin password; prompts otherwise");

    std::string onoff;
    auto* set_security = app.add_subcommand("set-security", "toggle enforcement");
    set_security->add_option("state", onoff, "on or off")
        ->required()
        ->check(CLI::IsMember({"on", "off"}));

    std::string new_password;
    auto* set_password = app.add_subcommand("set-password", "change the admin password");
    set_password->add_option("new-password", new_password, "replacement password")->required();

    std::string owner, type, name;
    auto* add_object = app.add_subcommand("add-object", "protect an object");
    add_object->add_option("owner", owner)->required();
    add_object->add_option("type", type)->required();
    add_object->add_option("name", name)->required();

    auto* remove_object = app.add_subcommand("remove-object", "unprotect an object");
    remove_object->add_option("owner", owner)->required();
    remove_object->add_option("type", type)->required();
    remove_object->add_option("name", name)->required();

    std::string grantee, start_date, end_date;
    int start_hour = -1, end_hour = -1;
    auto* grant = app.add_subcommand("grant", "permit a user on a protected object");
    grant->add_option("user", grantee)->required();
    grant->add_option("owner", owner)->required();
    grant->add_option("type", type)->required();
    grant->add_option("name", name)->required();
    grant->add_option("--start-date", start_date, "YYYY-MM-DD, inclusive");
    grant->add_option("--end-date", end_date, "YYYY-MM-DD, inclusive");
    grant->add_option("--start-hour", start_hour, "0-23")->check(CLI::Range(0, 23));
    grant->add_option("--end-hour", end_hour, "0-23")->check(CLI::Range(0, 23));

    auto* revoke = app.add_subcommand("revoke", "withdraw a user's grants on an object");
    revoke->add_option("user", grantee)->required();
    revoke->add_option("owner", owner)->required();
    revoke->add_option("type", type)->required();
    revoke->add_option("name", name)->required();

    std::string from_date, to_date, out_path;
    auto* export_killed = app.add_subcommand("export-killed", "dump the kill audit as CSV");
    export_killed->add_option("--from", from_date, "YYYY-MM-DD, inclusive");
    export_killed->add_option("--to", to_date, "YYYY-MM-DD, inclusive");
    export_killed->add_option("--out", out_path, "output file, stdout when absent");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    std::string password;
    if (!password_file.empty()) {
        auto line = guard::tool::read_first_line(password_file);
        if (!line.ok()) return fail(line.error().message);
        password = line.value();
    } else {
        password = guard::tool::prompt_secret("Admin password: ");
    }

    auto client = guard::net::AdminClient::connect(host, port, password);
    if (!client.ok()) return fail(client.error().message);

    if (export_killed->parsed()) {
        auto csv = client.value().export_killed(from_date, to_date);
        if (!csv.ok()) return fail(csv.error().message);
        if (out_path.empty()) {
            std::cout << csv.value();
        } else {
            std::ofstream out(out_path, std::ios::binary);
            if (!out) return fail("cannot write " + out_path);
            out << csv.value();
            if (!out.flush()) return fail("cannot write " + out_path);
        }
        return 0;
    }

    std::string cmd;
    if (set_security->parsed()) {
        cmd = "SET_SECURITY " + onoff;
    } else if (set_password->parsed()) {
        cmd = "SET_PASSWORD " + password + " " + new_password;
    } else if (add_object->parsed()) {
        cmd = "ADD_OBJECT " + owner + " " + type + " " + name;
    } else if (remove_object->parsed()) {
        cmd = "REMOVE_OBJECT " + owner + " " + type + " " + name;
    } else if (grant->parsed()) {
        cmd = "GRANT " + grantee + " " + owner + " " + type + " " + name;
        if (!start_date.empty()) cmd += " start_date=" + start_date;
        if (!end_date.empty()) cmd += " end_date=" + end_date;
        if (start_hour >= 0) cmd += " start_hour=" + std::to_string(start_hour);
        if (end_hour >= 0) cmd += " end_hour=" + std::to_string(end_hour);
    } else if (revoke->parsed()) {
        cmd = "REVOKE " + grantee + " " + owner + " " + type + " " + name;
    }

    auto reply = client.value().command(cmd);
    if (!reply.ok()) return fail(reply.error().message);
    std::cout << reply.value() << "\n";
    return reply.value().rfind("ERR", 0) == 0 ? 1 : 0;
}
