package com.example;

public class WorkScheduler {

    public void schedule(Activity host) {
        host.runOnUiThread(new Runnable() {
            public void run() {
                tick();
            }
        });
        ExecutorService pool = newPool();
        pool.submit(new Runnable() {
            public void run() {
                tick();
            }
        });
        Runnable task = new Runnable() {
            public void run() {
                tick();
            }
        };
        Thread worker = new Thread(task);
        worker.start();
    }

    void tick() {
        int beats = 0;
        beats = beats + 1;
    }

    ExecutorService newPool() {
        return null;
    }
}
