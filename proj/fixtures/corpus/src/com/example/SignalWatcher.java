package com.example;

public class SignalWatcher extends PhoneStateListener {

    public void onDataConnectionStateChanged(int state) {
        int observed = state;
        observed = observed + 1;
    }
}
