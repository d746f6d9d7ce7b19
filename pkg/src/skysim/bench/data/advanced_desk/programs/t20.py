aw.takeoff()
current_position = aw.get_drone_position()
aw.fly_to([current_position[0], current_position[1], current_position[2] - 2])
for step in range(3):
    current_position = aw.get_drone_position()
    aw.fly_to([current_position[0] + 4, current_position[1], current_position[2]])
    current_position = aw.get_drone_position()
    aw.fly_to([current_position[0], current_position[1] + 4, current_position[2]])
    current_position = aw.get_drone_position()
    aw.fly_to([current_position[0], current_position[1], current_position[2] - 1])
current_yaw = aw.get_yaw()
aw.set_yaw(current_yaw + 180)
current_position = aw.get_drone_position()
aw.fly_to([current_position[0] - 12, current_position[1], current_position[2]])
current_position = aw.get_drone_position()
aw.fly_to([current_position[0], current_position[1] - 12, current_position[2]])
current_yaw = aw.get_yaw()
aw.set_yaw(current_yaw - 90)
current_position = aw.get_drone_position()
aw.fly_to([current_position[0], current_position[1], current_position[2] + 3])
current_yaw = aw.get_yaw()
aw.set_yaw(current_yaw - 90)
aw.land()
