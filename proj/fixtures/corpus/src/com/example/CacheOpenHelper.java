package com.example;

public class CacheOpenHelper extends SQLiteOpenHelper {

    public void onCreate(SQLiteDatabase db) {
        seedTables(db);
    }

    public void onUpgrade(SQLiteDatabase db, int oldVersion, int newVersion) {
        seedTables(db);
    }

    void seedTables(SQLiteDatabase db) {
        int tables = 2;
        tables = tables + 1;
    }
}
