aw.takeoff()
current_position = aw.get_drone_position()
aw.fly_to([current_position[0], current_position[1], current_position[2] - 5])
for lap in range(2):
    current_yaw = aw.get_yaw()
    aw.set_yaw(current_yaw + 90)
    current_position = aw.get_drone_position()
    aw.fly_to([current_position[0] + 5, current_position[1], current_position[2]])
    current_yaw = aw.get_yaw()
    aw.set_yaw(current_yaw + 90)
    current_position = aw.get_drone_position()
    aw.fly_to([current_position[0], current_position[1] + 5, current_position[2]])
    current_yaw = aw.get_yaw()
    aw.set_yaw(current_yaw + 90)
    current_position = aw.get_drone_position()
    aw.fly_to([current_position[0] - 5, current_position[1], current_position[2]])
    current_yaw = aw.get_yaw()
    aw.set_yaw(current_yaw + 90)
    current_position = aw.get_drone_position()
    aw.fly_to([current_position[0], current_position[1] - 5, current_position[2]])
aw.land()
