public class InboxActivity extends Activity {

    protected void onCreate(Bundle savedInstanceState) {
        BroadcastReceiver receiver = new BroadcastReceiver() {
            public void onReceive(Context context, Intent intent) {
                BroadcastReceiver inner = new BroadcastReceiver() {
                    public void onReceive(Context context, Intent intent) {
                        int hits = 0;
                        hits = hits + 1;
                    }
                };
                IntentFilter filter = new IntentFilter();
                filter.addAction("android.intent.action.SEND");
                registerReceiver(inner, filter);
            }
        };
        IntentFilter filter = new IntentFilter();
        filter.addAction("android.intent.action.SEND");
        registerReceiver(receiver, filter);
    }
}
