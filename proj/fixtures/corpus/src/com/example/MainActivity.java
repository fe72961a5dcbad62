package com.example;

public class MainActivity extends Activity {

    protected void onCreate(Bundle savedInstanceState) {
        setContentView(R.layout.activity_main);
        Button button = findViewById(R.id.send_button);
        button.setOnClickListener(new View.OnClickListener() {
            public void onClick(View v) {
                logClick();
            }
        });
        NavigationView nav = findViewById(R.id.nav_view);
        nav.setNavigationItemSelectedListener(new NavigationHandler());
        TelephonyManager telephony = getTelephony();
        telephony.listen(new SignalWatcher(), 64);
        WorkScheduler scheduler = new WorkScheduler();
        scheduler.schedule(this);
        BroadcastReceiver receiver = new BroadcastReceiver() {
            public void onReceive(Context context, Intent intent) {
                BroadcastReceiver inner = new BroadcastReceiver() {
                    public void onReceive(Context context, Intent intent) {
                        noteDelivery();
                    }
                };
                IntentFilter innerFilter = new IntentFilter();
                innerFilter.addAction("android.intent.action.SEND");
                registerReceiver(inner, innerFilter);
            }
        };
        IntentFilter filter = new IntentFilter();
        filter.addAction("android.intent.action.VIEW");
        registerReceiver(receiver, filter);
    }

    protected void onStart() {
        Telemetry telemetry = new Telemetry();
        telemetry.ping(2);
    }

    protected void onResume() {
        Telemetry telemetry = new Telemetry();
        telemetry.send("resume");
    }

    protected void onPause() {
        logClick();
    }

    public void sendFeedback(View view) {
        Dialog confirm = buildDialog();
        confirm.setOnDismissListener(new DialogInterface.OnDismissListener() {
            public void onDismiss(DialogInterface dialog) {
                noteDelivery();
            }
        });
    }

    void logClick() {
        noteDelivery();
    }

    void noteDelivery() {
        int beat = 0;
        beat = beat + 1;
    }

    Dialog buildDialog() {
        return null;
    }

    TelephonyManager getTelephony() {
        return null;
    }

    private void unusedHelper() {
        logClick();
    }
}
