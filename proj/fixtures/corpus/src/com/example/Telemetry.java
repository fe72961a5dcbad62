package com.example;

public class Telemetry {

    public void ping(int depth) {
        pong(depth);
    }

    public void pong(int depth) {
        ping(depth);
    }

    public void send(String channel) {
        format(channel);
    }

    String format(String channel) {
        return channel;
    }

    private void deadCode() {
        send("never");
    }
}
